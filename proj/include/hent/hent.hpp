#pragma once

#include "hent/circuits/circuit.hpp"
#include "hent/core/blas_guard.hpp"
#include "hent/core/budget.hpp"
#include "hent/core/entropy.hpp"
#include "hent/core/pauli.hpp"
#include "hent/core/rng.hpp"
#include "hent/core/state_ops.hpp"
#include "hent/core/subspace.hpp"
#include "hent/experiments/bounds_suite.hpp"
#include "hent/experiments/circuit_runs.hpp"
#include "hent/experiments/config.hpp"
#include "hent/experiments/fit.hpp"
#include "hent/experiments/gibbs_runs.hpp"
#include "hent/experiments/records.hpp"
#include "hent/experiments/registry.hpp"
#include "hent/gibbs/ising.hpp"
#include "hent/gibbs/quench.hpp"
#include "hent/spectra/alpha_c.hpp"
#include "hent/spectra/bounds.hpp"
#include "hent/spectra/hierarchy.hpp"
#include "hent/spectra/spike_cloud.hpp"
