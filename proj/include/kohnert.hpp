#pragma once

#include "kohnert/diagram.hpp"
#include "kohnert/explorer.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/io.hpp"
#include "kohnert/labeling.hpp"
#include "kohnert/moves.hpp"
#include "kohnert/snowfall.hpp"
#include "kohnert/solvers.hpp"
