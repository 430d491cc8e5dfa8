#pragma once

// Umbrella header for the hybrid-energy-system co-design library.

#include "hes/analysis.hpp"
#include "hes/common.hpp"
#include "hes/config_json.hpp"
#include "hes/economics.hpp"
#include "hes/mesh.hpp"
#include "hes/model.hpp"
#include "hes/mps.hpp"
#include "hes/signal.hpp"
#include "hes/simplex.hpp"
#include "hes/solve_report.hpp"
#include "hes/trajectory.hpp"
#include "hes/transcription.hpp"
