#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "drm/moment_core.hpp"

namespace drm {

// One numeric column, optional non-numeric header line. Blank lines are skipped.
EmpiricalSample load_series_csv(const std::filesystem::path& path);
std::vector<double> parse_series_csv(const std::string& text);

// Writes values one per line with 17 significant digits (round-trips exactly).
void write_series_csv(const std::filesystem::path& path, const std::vector<double>& values,
                      const std::string& header = "value");

// Wide layout: header "date,T1,T2,...", then one row per date.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    std::vector<std::vector<double>> prices;  // prices[ticker][date]
};

PricePanel load_price_panel_csv(const std::filesystem::path& path);
PricePanel parse_price_panel_csv(const std::string& text);

enum class Rebalance {
    Monthly,     // equal weights reset every period: mean of the tickers' simple returns
    BuyAndHold,  // equal dollar amounts at the first date, weights drift afterwards
};

// Period-over-period equal-weight portfolio returns, multiplied by `scale`
// (100 gives percent).
std::vector<double> prices_to_portfolio_returns(const PricePanel& panel, double scale = 100.0,
                                                Rebalance mode = Rebalance::Monthly);

}  // namespace drm
