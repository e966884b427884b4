#pragma once

#include "ppfock/config.hpp"
#include "ppfock/wick_algebra.hpp"
#include "ppfock/quadrature.hpp"
#include "ppfock/hermite.hpp"
#include "ppfock/point_configuration.hpp"
#include "ppfock/kernels.hpp"
#include "ppfock/gaussian_field.hpp"
#include "ppfock/samplers.hpp"
#include "ppfock/estimators.hpp"
#include "ppfock/fock_engine.hpp"
#include "ppfock/fermion_builder.hpp"
