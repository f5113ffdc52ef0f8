#pragma once

#include "confdirac/errors.hpp"
#include "confdirac/quantum_numbers.hpp"
#include "confdirac/special_functions.hpp"
#include "confdirac/coulomb_reference.hpp"
#include "confdirac/radial_equations.hpp"
#include "confdirac/exact_ansatz.hpp"
#include "confdirac/fw_effective.hpp"
#include "confdirac/radial_solver.hpp"
#include "confdirac/rescale_transform.hpp"
