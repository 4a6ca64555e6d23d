/**
 * @file dtns.hpp
 * @brief Umbrella header for the dtns library.
 */
#pragma once

#include "dtns/bigint.hpp"
#include "dtns/classify.hpp"
#include "dtns/core.hpp"
#include "dtns/error.hpp"
#include "dtns/json.hpp"
#include "dtns/numeration.hpp"
#include "dtns/positionality.hpp"
#include "dtns/trees.hpp"
