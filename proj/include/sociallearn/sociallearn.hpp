#pragma once

#include "sociallearn/error.hpp"
#include "sociallearn/rational.hpp"
#include "sociallearn/simplex.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/blackwell.hpp"
#include "sociallearn/equilibrium.hpp"
#include "sociallearn/orders.hpp"
#include "sociallearn/scenarios.hpp"
#include "sociallearn/io.hpp"
