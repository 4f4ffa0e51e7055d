#pragma once

#include "lgl/random.hpp"
#include "lgl/profile.hpp"
#include "lgl/game.hpp"
#include "lgl/analysis.hpp"
#include "lgl/families.hpp"
#include "lgl/oracle.hpp"
#include "lgl/plane.hpp"
#include "lgl/report.hpp"
#include "lgl/binary.hpp"
#include "lgl/continuous.hpp"
#include "lgl/blocks.hpp"
#include "lgl/experiment.hpp"
