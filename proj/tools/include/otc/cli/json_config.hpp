#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace otc::cli {

/// Reads flat JSON objects ({"gamma": 1.0, "ks": [2, 5]}) as option values
/// for whichever subcommand was invoked. Arrays supply multiple values.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

 private:
  const CLI::App* app_;
};

}  // namespace otc::cli
