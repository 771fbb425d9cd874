#pragma once

#include "starmod/certify.hpp"
#include "starmod/complex_matrix.hpp"
#include "starmod/deformation.hpp"
#include "starmod/descent.hpp"
#include "starmod/errors.hpp"
#include "starmod/extreme_states.hpp"
#include "starmod/feasibility.hpp"
#include "starmod/hermitian_eig.hpp"
#include "starmod/hilbert_module.hpp"
#include "starmod/rng.hpp"
#include "starmod/scenario.hpp"
#include "starmod/serialize.hpp"
#include "starmod/span.hpp"
#include "starmod/star_algebra.hpp"
#include "starmod/state.hpp"
