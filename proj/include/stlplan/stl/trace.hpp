#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stlplan::stl {

/// Sampled multi-channel signal. Timestamps are strictly increasing and every
/// channel carries one value per timestamp.
class Trace {
 public:
  using Channel = std::pair<std::string, std::vector<double>>;

  Trace(std::vector<double> timestamps, std::vector<Channel> channels);

  std::size_t size() const { return timestamps_.size(); }
  std::span<const double> timestamps() const { return timestamps_; }

  bool has_channel(const std::string& name) const;
  /// Throws stl::EvaluationError if the channel is absent.
  std::span<const double> channel(const std::string& name) const;
  std::vector<std::string> channel_names() const;
  const std::vector<Channel>& channels() const { return channels_; }

 private:
  std::vector<double> timestamps_;
  std::vector<Channel> channels_;
};

/// CSV with header `t,<signal1>,<signal2>,...`, one row per sample.
Trace read_trace_csv(std::istream& in);
Trace load_trace_csv(const std::string& path);
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace stlplan::stl
