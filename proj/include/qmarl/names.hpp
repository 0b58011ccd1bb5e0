#pragma once

#include <string>

#include "qmarl/envs/coopnav.hpp"
#include "qmarl/policies/bundle.hpp"
#include "qmarl/statevector.hpp"

namespace qmarl {

// String forms used by config files, checkpoints and reports.

std::string to_string(qsim::Entanglement e);
qsim::Entanglement entanglement_from_string(const std::string& name);

std::string to_string(policies::ReadoutMode mode);
policies::ReadoutMode readout_from_string(const std::string& name);

std::string to_string(envs::ObsEncoding encoding);
envs::ObsEncoding encoding_from_string(const std::string& name);

std::string to_string(policies::HybridisationTag tag);
policies::HybridisationTag hybridisation_from_string(const std::string& name);

}  // namespace qmarl
