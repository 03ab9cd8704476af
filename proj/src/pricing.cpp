#include "prodline/pricing.hpp"

#include <cmath>
#include <string>

namespace prodline {

namespace {
void require_mean(double mean) {
    if (mean < -kTieTol || mean > 1.0 + kTieTol)
        throw DomainError("posterior mean outside [0,1]: " + std::to_string(mean));
}
}  // namespace

int q2_serves_low(double mean, const ModelParams& params, TieBreak tie) {
    require_mean(mean);
    const double mu = params.mu_bar();
    if (mean < mu - kTieTol) return 1;
    if (mean > mu + kTieTol) return 0;
    return tie == TieBreak::FavorLow ? 1 : 0;
}

double period2_price(double mean, const ModelParams& params, TieBreak tie) {
    return q2_serves_low(mean, params, tie) ? params.v_l : params.v_h;
}

double period2_revenue(double mean, const ModelParams& params, TieBreak tie) {
    return q2_serves_low(mean, params, tie) ? params.v_l : mean * params.v_h;
}

}  // namespace prodline
