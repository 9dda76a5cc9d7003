#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "polarsim/bot.hpp"
#include "polarsim/engine.hpp"
#include "polarsim/world.hpp"

namespace polarsim {

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string format_double(double v);  // shortest round-trip, stable output
std::uint64_t fnv1a64(const std::string& data);
std::uint64_t hash_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// World snapshot: users.csv + follows.edges (ascii "src dst" lines, sorted),
// both with a `# seed=...` header line.
void save_world(const World& world, const std::filesystem::path& dir);
void load_world_graph(World& world, const std::filesystem::path& dir);

void write_event_log(const std::vector<EventRecord>& log, std::uint64_t seed,
                     const std::filesystem::path& path);

// Exposed-message detail needed to recompute word frequencies offline.
void write_messages_jsonl(const World& world, const std::vector<MessageId>& ids,
                          std::uint64_t seed, const std::filesystem::path& path);

void write_exposure_log(const BotState& bot, std::uint64_t seed,
                        const std::filesystem::path& path);
std::vector<ExposureRecord> read_exposure_log(const std::filesystem::path& path);

void write_followings_csv(const std::vector<BotState>& bots,
                          const std::filesystem::path& path);

struct ManifestEntry {
  std::string relative_path;
  std::uint64_t bytes = 0;
  std::string hash_hex;
};

// Hashes every regular file under `dir` except the manifest itself.
std::vector<ManifestEntry> build_manifest(const std::filesystem::path& dir);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

}  // namespace polarsim
