#pragma once

#include "xispectra/errors.hpp"
#include "xispectra/gamma.hpp"
#include "xispectra/lambda.hpp"
#include "xispectra/log_polar.hpp"
#include "xispectra/mfunction.hpp"
#include "xispectra/numeric.hpp"
#include "xispectra/primes.hpp"
#include "xispectra/spacing.hpp"
#include "xispectra/version.hpp"
#include "xispectra/xi.hpp"
#include "xispectra/zero_engine.hpp"
#include "xispectra/zeta.hpp"
