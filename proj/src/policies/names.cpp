#include "qmarl/names.hpp"

#include <stdexcept>

namespace qmarl {

std::string to_string(qsim::Entanglement e) {
    switch (e) {
        case qsim::Entanglement::Product: return "product";
        case qsim::Entanglement::PhiPlus: return "phi_plus";
        case qsim::Entanglement::PhiMinus: return "phi_minus";
        case qsim::Entanglement::PsiPlus: return "psi_plus";
        case qsim::Entanglement::PsiMinus: return "psi_minus";
        case qsim::Entanglement::GHZ: return "ghz";
    }
    return "product";
}

qsim::Entanglement entanglement_from_string(const std::string& name) {
    if (name == "product") return qsim::Entanglement::Product;
    if (name == "phi_plus") return qsim::Entanglement::PhiPlus;
    if (name == "phi_minus") return qsim::Entanglement::PhiMinus;
    if (name == "psi_plus") return qsim::Entanglement::PsiPlus;
    if (name == "psi_minus") return qsim::Entanglement::PsiMinus;
    if (name == "ghz") return qsim::Entanglement::GHZ;
    throw std::invalid_argument("unknown entanglement: " + name);
}

std::string to_string(policies::ReadoutMode mode) {
    return mode == policies::ReadoutMode::ZExpectation ? "z_expectation"
                                                       : "full_distribution";
}

policies::ReadoutMode readout_from_string(const std::string& name) {
    if (name == "z_expectation") return policies::ReadoutMode::ZExpectation;
    if (name == "full_distribution") return policies::ReadoutMode::FullDistribution;
    throw std::invalid_argument("unknown readout mode: " + name);
}

std::string to_string(envs::ObsEncoding encoding) {
    return encoding == envs::ObsEncoding::ContinuousNormalised ? "continuous"
                                                               : "onehot";
}

envs::ObsEncoding encoding_from_string(const std::string& name) {
    if (name == "continuous") return envs::ObsEncoding::ContinuousNormalised;
    if (name == "onehot") return envs::ObsEncoding::OneHotCells;
    throw std::invalid_argument("unknown observation encoding: " + name);
}

std::string to_string(policies::HybridisationTag tag) {
    if (tag.quantum_actor && tag.quantum_critic) return "quantum";
    if (tag.quantum_actor) return "quantum_actor";
    if (tag.quantum_critic) return "quantum_critic";
    return "classical";
}

policies::HybridisationTag hybridisation_from_string(const std::string& name) {
    if (name == "classical") return {false, false};
    if (name == "quantum_actor") return {true, false};
    if (name == "quantum_critic") return {false, true};
    if (name == "quantum") return {true, true};
    throw std::invalid_argument("unknown hybridisation: " + name);
}

}  // namespace qmarl
