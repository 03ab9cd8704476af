#pragma once

#include "prodline/model.hpp"

namespace prodline {

/// Direction in which the period-2 firm resolves its indifference when the
/// posterior mean equals mu_bar. The break is chosen in favor of the
/// period-1 firm, which differs by regime.
enum class TieBreak { FavorLow, FavorHigh };

/// Band around mu_bar inside which the tie rule applies, so cells built to
/// land exactly on the indifference point price as intended despite rounding.
inline constexpr double kTieTol = 1e-12;

/// Whether the period-2 firm serves the low-valuation consumer: 1 when the
/// posted price is v_L (everyone buys), 0 when it is v_H.
int q2_serves_low(double mean, const ModelParams& params, TieBreak tie);

/// The sequentially rational posted price in period 2 given the posterior
/// mean of the type: v_L below mu_bar, v_H above, tie rule at mu_bar.
double period2_price(double mean, const ModelParams& params, TieBreak tie);

/// Expected period-2 revenue at the posted price: max(mean*v_H, v_L) with
/// the stated tie resolution.
double period2_revenue(double mean, const ModelParams& params, TieBreak tie);

}  // namespace prodline
