#include "epscope/model.hpp"

#include <cmath>
#include <string>

#include "epscope/error.hpp"

namespace epscope {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_model: return "InvalidModel";
    case Errc::degenerate_at_ep: return "DegenerateAtEP";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::tracking_ambiguity: return "TrackingAmbiguity";
    case Errc::window_too_narrow: return "WindowTooNarrow";
    case Errc::no_crossing: return "NoCrossing";
    case Errc::degenerate_widths: return "DegenerateWidths";
    case Errc::not_bracketed: return "NotBracketed";
    case Errc::gap_floor_not_reached: return "GapFloorNotReached";
    case Errc::config: return "ConfigError";
    }
    return "Unknown";
}

double ComplexMatrix::norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::is_symmetric() const {
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = r + 1; c < n_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

void validate(const ModelSpec& model) {
    const std::size_t n = model.size();
    if (n < 2) throw Error(Errc::invalid_model, "levels: need at least 2 levels");
    if (model.coupling.order() != n)
        throw Error(Errc::invalid_model, "coupling: order " + std::to_string(model.coupling.order()) +
                                             " does not match " + std::to_string(n) + " levels");
    for (std::size_t k = 0; k < n; ++k) {
        const auto& lv = model.levels[k];
        if (!std::isfinite(lv.energy.intercept) || !std::isfinite(lv.energy.slope))
            throw Error(Errc::invalid_model, "level " + std::to_string(k + 1) + ": non-finite energy law");
        if (!std::isfinite(lv.gamma) || lv.gamma < 0.0)
            throw Error(Errc::invalid_model, "level " + std::to_string(k + 1) + ": gamma must be >= 0");
        if (model.coupling(k, k) != 0.0)
            throw Error(Errc::invalid_model, "coupling: diagonal entry " + std::to_string(k + 1) + " must be 0");
        for (std::size_t l = k + 1; l < n; ++l) {
            if (!std::isfinite(model.coupling(k, l)))
                throw Error(Errc::invalid_model, "coupling: non-finite entry");
            if (model.coupling(k, l) != model.coupling(l, k))
                throw Error(Errc::invalid_model, "coupling: entries (" + std::to_string(k + 1) + "," +
                                                     std::to_string(l + 1) + ") not symmetric");
        }
    }
}

ModelSpec two_level(EnergyLaw e1, EnergyLaw e2, double gamma_half1, double gamma_half2,
                    double omega) {
    ModelSpec m;
    m.levels = {LevelSpec{e1, 2.0 * gamma_half1}, LevelSpec{e2, 2.0 * gamma_half2}};
    m.coupling = RealMatrix(2);
    m.coupling(0, 1) = m.coupling(1, 0) = omega;
    return m;
}

ModelSpec uniform_coupling(std::vector<LevelSpec> levels, double omega) {
    ModelSpec m;
    const std::size_t n = levels.size();
    m.levels = std::move(levels);
    m.coupling = RealMatrix(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            if (k != l) m.coupling(k, l) = omega;
    return m;
}

ComplexMatrix build_matrix(const ModelSpec& model, double a) {
    const std::size_t n = model.size();
    ComplexMatrix h(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& lv = model.levels[k];
        h(k, k) = cplx(lv.energy(a), -0.5 * lv.gamma);
        for (std::size_t l = 0; l < n; ++l)
            if (l != k) h(k, l) = cplx(-model.coupling(k, l), 0.0);
    }
    return h;
}

std::vector<cplx> unperturbed_spectrum(const ModelSpec& model, double a) {
    std::vector<cplx> eps;
    eps.reserve(model.size());
    for (const auto& lv : model.levels) eps.emplace_back(lv.energy(a), -0.5 * lv.gamma);
    return eps;
}

ModelSpec reference_two_level(double gamma_half1, double omega) {
    return two_level(EnergyLaw{1.0, -0.5}, EnergyLaw{0.0, 1.0}, gamma_half1, 1.1 * gamma_half1, omega);
}

} // namespace epscope
