#pragma once

#include <string>
#include <utility>
#include <vector>

namespace herdsig::svg {

// ROC polyline over the unit square with the chance diagonal.
std::string roc_plot(const std::vector<std::pair<double, double>>& fpr_tpr, const std::string& title);

// Horizontal bar chart.
std::string bar_chart(const std::vector<std::pair<std::string, double>>& bars, const std::string& title);

}  // namespace herdsig::svg
