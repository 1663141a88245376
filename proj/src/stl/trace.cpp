#include "stlplan/stl/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stlplan/common/error.hpp"
#include "stlplan/stl/robustness.hpp"

namespace stlplan::stl {

Trace::Trace(std::vector<double> timestamps, std::vector<Channel> channels)
    : timestamps_(std::move(timestamps)), channels_(std::move(channels)) {
  if (timestamps_.empty()) throw InvalidArgument("trace must contain at least one sample");
  for (std::size_t i = 0; i < timestamps_.size(); ++i) {
    if (!std::isfinite(timestamps_[i])) throw InvalidArgument("trace timestamps must be finite");
    if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
      throw InvalidArgument("trace timestamps must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    const auto& [name, values] = channels_[c];
    if (values.size() != timestamps_.size()) {
      throw InvalidArgument("channel '" + name + "' has " + std::to_string(values.size()) + " values for " +
                            std::to_string(timestamps_.size()) + " timestamps");
    }
    for (std::size_t d = 0; d < c; ++d) {
      if (channels_[d].first == name) throw InvalidArgument("duplicate channel '" + name + "'");
    }
  }
}

bool Trace::has_channel(const std::string& name) const {
  for (const auto& ch : channels_) {
    if (ch.first == name) return true;
  }
  return false;
}

std::span<const double> Trace::channel(const std::string& name) const {
  for (const auto& ch : channels_) {
    if (ch.first == name) return ch.second;
  }
  throw EvaluationError("trace has no channel '" + name + "'");
}

std::vector<std::string> Trace::channel_names() const {
  std::vector<std::string> names;
  names.reserve(channels_.size());
  for (const auto& ch : channels_) names.push_back(ch.first);
  return names;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw InvalidArgument("trace CSV row " + std::to_string(row) + ": cannot parse '" + cell + "' as a number");
  }
  return v;
}

}  // namespace

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("trace CSV is empty");
  const auto header = split_row(line);
  if (header.empty() || header[0] != "t") throw InvalidArgument("trace CSV header must start with 't'");
  std::vector<double> ts;
  std::vector<Trace::Channel> channels;
  for (std::size_t i = 1; i < header.size(); ++i) channels.emplace_back(header[i], std::vector<double>{});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw InvalidArgument("trace CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(header.size()));
    }
    ts.push_back(parse_cell(cells[0], row));
    for (std::size_t i = 1; i < cells.size(); ++i) channels[i - 1].second.push_back(parse_cell(cells[i], row));
  }
  return Trace(std::move(ts), std::move(channels));
}

Trace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "t";
  for (const auto& ch : trace.channels()) out << ',' << ch.first;
  out << '\n';
  char buf[64];
  auto put = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, end - buf);
  };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    put(trace.timestamps()[i]);
    for (const auto& ch : trace.channels()) {
      out << ',';
      put(ch.second[i]);
    }
    out << '\n';
  }
}

}  // namespace stlplan::stl
