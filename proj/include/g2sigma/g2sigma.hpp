#pragma once

#include "g2sigma/common.hpp"
#include "g2sigma/quadrature.hpp"
#include "g2sigma/curve.hpp"
#include "g2sigma/ring.hpp"
#include "g2sigma/jet.hpp"
#include "g2sigma/theta.hpp"
#include "g2sigma/periods.hpp"
#include "g2sigma/sigma.hpp"
#include "g2sigma/abel.hpp"
#include "g2sigma/kleinian.hpp"
#include "g2sigma/identities.hpp"
#include "g2sigma/io.hpp"
