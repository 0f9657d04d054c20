#include "semilab/report.hpp"

#include "format.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace semilab {

namespace {

void write_value(std::ostringstream& out, const nlohmann::json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      // nlohmann's default object is a std::map, so iteration is key-sorted.
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << nlohmann::json(it.key()).dump() << ": ";
        write_value(out, it.value(), depth + 1);
      }
      out << '\n' << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(), [](const nlohmann::json& e) { return e.is_structured(); });
      if (flat) {
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) out << ", ";
          write_value(out, j[i], depth + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << ",\n";
        out << pad;
        write_value(out, j[i], depth + 1);
      }
      out << '\n' << close_pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? detail::fmt17(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j) {
  std::ostringstream out;
  write_value(out, j, 0);
  out << '\n';
  return out.str();
}

std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  const std::filesystem::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
  return path;
}

std::filesystem::path emit_report(const ScenarioResult& result, const std::filesystem::path& dir,
                                  const std::string& stem) {
  return write_text_file(dir, stem + ".json", canonical_json(to_json(result)));
}

std::string frequencies_csv(const std::vector<PhaseFit>& fits) {
  std::ostringstream out;
  out << "k,omega,residual\n";
  for (std::size_t k = 0; k < fits.size(); ++k) {
    out << k + 1 << ',' << detail::fmt17(fits[k].omega) << ',' << detail::fmt17(fits[k].max_residual) << '\n';
  }
  return out.str();
}

}  // namespace semilab
