#pragma once
#include "bimodules.hpp"
#include "dendroidal.hpp"
#include "errors.hpp"
#include "fincat.hpp"
#include "io.hpp"
#include "kontsevich.hpp"
#include "polymonad.hpp"
#include "tree.hpp"
#include "suites.hpp"
