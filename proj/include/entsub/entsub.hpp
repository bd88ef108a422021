#pragma once

#include "applications.hpp"
#include "certify.hpp"
#include "combinatorics.hpp"
#include "construction.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "multistart.hpp"
#include "subspace.hpp"
#include "tensor_core.hpp"
