#pragma once

#include "ffem/quadrature.hpp"
#include "ffem/polynomial.hpp"
#include "ffem/frac_kernel.hpp"
#include "ffem/mesh.hpp"
#include "ffem/parallel.hpp"
#include "ffem/nonlocal_basis.hpp"
#include "ffem/beam_system.hpp"
#include "ffem/solver.hpp"
#include "ffem/classical.hpp"
#include "ffem/config.hpp"
#include "ffem/problem.hpp"
#include "ffem/post.hpp"
#include "ffem/manufactured.hpp"
#include "ffem/validation.hpp"
