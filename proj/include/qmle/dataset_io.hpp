#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmle/errors.hpp"
#include "qmle/model.hpp"
#include "qmle/synthetic.hpp"

namespace qmle {

/// On-disk dataset: metadata plus aggregated shot records. Operators are never
/// serialized; they are reconstructed from the Pauli words and outcomes on
/// read. The JSON schema is
///   {"version": 1, "q": ..., "seed": ..., "state": "W",
///    "shots": [{"pauli": "XZ...", "outcome": +-1, "count": ...}, ...]}
/// with "state" optional for data of unknown provenance.
struct DatasetFile {
  int qubits = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> state;  ///< true-state descriptor; "W" for the W state
  std::vector<ShotRecord> records;
};

inline constexpr int kDatasetFormatVersion = 1;

inline void write_dataset(const std::filesystem::path& path, const DatasetFile& file) {
  nlohmann::json shots = nlohmann::json::array();
  for (const ShotRecord& record : file.records) {
    shots.push_back({{"pauli", record.pauli.letters()},
                     {"outcome", record.outcome},
                     {"count", record.count}});
  }
  nlohmann::json doc{{"version", kDatasetFormatVersion},
                     {"q", file.qubits},
                     {"seed", file.seed},
                     {"shots", std::move(shots)}};
  if (file.state) {
    doc["state"] = *file.state;
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

inline DatasetFile read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    const int version = doc.at("version").get<int>();
    if (version != kDatasetFormatVersion) {
      throw VersionError(path.string() + ": unsupported dataset version " +
                         std::to_string(version));
    }
    DatasetFile file;
    file.qubits = doc.at("q").get<int>();
    if (file.qubits < 1) {
      throw ParseError(path.string() + ": q must be at least 1");
    }
    file.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("state")) {
      file.state = doc.at("state").get<std::string>();
    }
    for (const auto& shot : doc.at("shots")) {
      PauliString pauli(shot.at("pauli").get<std::string>());
      if (pauli.qubits() != file.qubits) {
        throw ParseError(path.string() + ": pauli word length does not match q");
      }
      const int outcome = shot.at("outcome").get<int>();
      if (outcome != 1 && outcome != -1) {
        throw ParseError(path.string() + ": outcome must be +1 or -1");
      }
      const std::uint64_t count = shot.at("count").get<std::uint64_t>();
      if (count < 1) {
        throw ParseError(path.string() + ": count must be at least 1");
      }
      file.records.push_back({std::move(pauli), outcome, count});
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline ShotDataset to_shot_dataset(const DatasetFile& file) {
  return build_dataset(file.records, file.qubits);
}

/// Reference state for fidelity reporting, when the file declares one.
inline std::optional<PureState> true_state(const DatasetFile& file) {
  if (!file.state) {
    return std::nullopt;
  }
  if (*file.state == "W") {
    return w_state(file.qubits);
  }
  throw ParseError("unknown state descriptor '" + *file.state + "'");
}

}  // namespace qmle
