#pragma once

#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/rng.hpp"
#include "mixnorm/tensor.hpp"
#include "mixnorm/exponents.hpp"
#include "mixnorm/forms.hpp"
#include "mixnorm/constants.hpp"
#include "mixnorm/experiments.hpp"
#include "mixnorm/io.hpp"
