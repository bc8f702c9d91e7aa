#pragma once

// Umbrella header: BNSL-as-QUBO encoding, classical samplers, the
// divide-et-impera decomposition, and the evaluation metrics.

#include "bnsl/bayes_net.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/decomposition.hpp"
#include "bnsl/encoder.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/eval.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/index_map.hpp"
#include "bnsl/qubo.hpp"
#include "bnsl/rng.hpp"
#include "bnsl/score.hpp"
#include "bnsl/solvers.hpp"
