#include "kppca/run_metadata.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "kppca/errors.hpp"

namespace kppca {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string RunMetadata::to_json(bool with_timestamp) const {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["kernel"] = {{"family", kernel.name()}, {"gamma", kernel.gamma}};
  j["q"] = q;
  j["sigma2"] = sigma2;
  j["explained_variance"] = explained_variance;
  if (with_timestamp) j["timestamp"] = timestamp;
  if (!extra.empty()) j["settings"] = extra;
  return j.dump(2);
}

RunMetadata RunMetadata::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunMetadata m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& kernel = j.at("kernel");
    m.kernel.family = kernel.at("family").get<std::string>() == "rbf" ? KernelFamily::Rbf
                                                                     : KernelFamily::Linear;
    m.kernel.gamma = kernel.at("gamma").get<double>();
    m.q = j.at("q").get<int>();
    m.sigma2 = j.at("sigma2").get<double>();
    m.explained_variance = j.at("explained_variance").get<double>();
    if (j.contains("timestamp")) m.timestamp = j.at("timestamp").get<std::string>();
    if (j.contains("settings")) m.extra = j.at("settings").get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("run metadata: ") + e.what());
  }
}

void RunMetadata::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << to_json(true) << '\n';
}

}  // namespace kppca
