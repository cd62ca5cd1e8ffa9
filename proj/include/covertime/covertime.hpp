#pragma once

#include "covertime/graph.hpp"
#include "covertime/parallel.hpp"
#include "covertime/resistance.hpp"
#include "covertime/entropy_bounds.hpp"
#include "covertime/walk.hpp"
#include "covertime/generators.hpp"
#include "covertime/experiments.hpp"
#include "covertime/report_json.hpp"
