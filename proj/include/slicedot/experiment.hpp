#pragma once

#include <string>
#include <vector>

#include "slicedot/io.hpp"

namespace slicedot {

// Experiment description (JSON):
//   name        free text
//   solver      { "slicing": "psw" | "ssw" | "sosw", "method": "free" | "fixed" | "radon" }
//   inputs      list of dataset descriptors, each either { "file": path } or
//               { "shape": vmf | croissant | smiley | equator | antipodal-diracs
//                          | uniform | so3-cluster | so3-uniform, "n", "seed", ... }
//   lambda      barycentric weights (default uniform)
//   init        descriptor of the free-support initialization (default uniform sample)
//   iterations, slices, tau, tau_schedule ("constant" | "decaying"), seed, p
//   degree      Radon truncation degree D
//   grid        { "n_theta", "n_phi" } for fixed-support and Radon runs
//   kde_kappa   kernel concentration when point inputs are turned into densities
//
// The returned RunReport echoes the normalized config so that running it
// again reproduces the loss trace bit for bit.
[[nodiscard]] json run_experiment(const json& spec);

// Fills defaults and validates; throws std::invalid_argument on bad input.
[[nodiscard]] json normalize_experiment(const json& spec);

// Dataset descriptor → measure (files are read relative to the working directory).
[[nodiscard]] DiscreteMeasure load_dataset(const json& descriptor);

[[nodiscard]] json environment_fingerprint();

}  // namespace slicedot
