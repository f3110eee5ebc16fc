#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fplab {

/// One row of the result-label table used in reports and summaries.
struct ResultLabel {
  std::string id;
  std::string title;
  std::string checks;
};

const std::vector<ResultLabel>& result_labels();
/// Throws Error{InvalidArgument} for unknown ids.
const ResultLabel& result_label(std::string_view id);

}  // namespace fplab
