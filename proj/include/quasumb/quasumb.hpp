#pragma once

// Everything except the command-line layer (cli.hpp needs CLI11).
#include "quasumb/error.hpp"
#include "quasumb/export.hpp"
#include "quasumb/expr.hpp"
#include "quasumb/expr_eval.hpp"
#include "quasumb/frame_flow.hpp"
#include "quasumb/generators.hpp"
#include "quasumb/grid.hpp"
#include "quasumb/jet.hpp"
#include "quasumb/loci_classify.hpp"
#include "quasumb/mink_algebra.hpp"
#include "quasumb/parallel.hpp"
#include "quasumb/surface_geometry.hpp"
#include "quasumb/surface_spec.hpp"
#include "quasumb/verify.hpp"
