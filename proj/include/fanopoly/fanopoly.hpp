#pragma once

// Umbrella header: exact arithmetic for Fano polygon mutation, singularity
// content, maximally-mutable Laurent polynomials, classical periods, the
// one-step degeneration scaffold, and bounded classification.

#include "fanopoly/core.hpp"
#include "fanopoly/polygon.hpp"
#include "fanopoly/singularity.hpp"
#include "fanopoly/mutation.hpp"
#include "fanopoly/parampoly.hpp"
#include "fanopoly/laurent.hpp"
#include "fanopoly/period.hpp"
#include "fanopoly/pencil.hpp"
#include "fanopoly/json_io.hpp"
#include "fanopoly/census.hpp"
