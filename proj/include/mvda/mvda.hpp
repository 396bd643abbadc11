#pragma once

#include "mvda/errors.hpp"
#include "mvda/linalg.hpp"
#include "mvda/special.hpp"
#include "mvda/rng.hpp"
#include "mvda/measures.hpp"
#include "mvda/averages.hpp"
#include "mvda/io.hpp"
#include "mvda/harness.hpp"
