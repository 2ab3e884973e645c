#pragma once

#include "tdual/core/base_space.hpp"
#include "tdual/core/direct_sum.hpp"
#include "tdual/core/finite_group.hpp"
#include "tdual/core/fixed_point.hpp"
#include "tdual/core/interior_tensor.hpp"
#include "tdual/core/linalg.hpp"
#include "tdual/core/module_verify.hpp"
#include "tdual/core/operator_field.hpp"
#include "tdual/core/projective_action.hpp"
#include "tdual/core/random_instance.hpp"
#include "tdual/core/rng.hpp"
