#include "polarsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace polarsim {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for hashing");
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return h;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

void save_world(const World& world, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "users.csv", std::ios::binary);
    if (!out) throw IoError((dir / "users.csv").string(), "cannot open for writing");
    out << "# seed=" << world.config.rng_seed << "\n";
    out << "user_id,topic,posting_rate,repost_prob\n";
    for (const auto& u : world.users)
      out << u.id << ',' << world.topic_names[u.topic] << ',' << format_double(u.posting_rate)
          << ',' << format_double(u.repost_prob) << "\n";
  }
  {
    std::ofstream out(dir / "follows.edges", std::ios::binary);
    if (!out) throw IoError((dir / "follows.edges").string(), "cannot open for writing");
    out << "# seed=" << world.config.rng_seed << "\n";
    for (UserId u = 0; u < world.graph.node_count(); ++u)
      for (UserId v : world.graph.out(u)) out << u << ' ' << v << "\n";
  }
}

void load_world_graph(World& world, const fs::path& dir) {
  const fs::path edges = dir / "follows.edges";
  std::ifstream in(edges);
  if (!in) throw IoError(edges.string(), "cannot open");
  world.graph = FollowGraph(world.users.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    UserId a = 0, b = 0;
    const char* s = line.c_str();
    auto r1 = std::from_chars(s, s + line.size(), a);
    if (r1.ec != std::errc{} || *r1.ptr != ' ')
      throw IoError(edges.string(), "malformed edge line: " + line);
    auto r2 = std::from_chars(r1.ptr + 1, s + line.size(), b);
    if (r2.ec != std::errc{}) throw IoError(edges.string(), "malformed edge line: " + line);
    world.graph.add_arc(a, b);
  }
}

void write_event_log(const std::vector<EventRecord>& log, std::uint64_t seed,
                     const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "# seed=" << seed << "\n";
  for (const auto& e : log) {
    out << "{\"t\":" << format_double(e.t) << ",\"kind\":\""
        << (e.kind == EventKind::post ? "post" : "repost") << "\",\"actor\":" << e.actor
        << ",\"message_id\":" << e.message_id;
    if (e.parent_id != kNoMessage) out << ",\"parent_id\":" << e.parent_id;
    out << "}\n";
  }
}

void write_messages_jsonl(const World& world, const std::vector<MessageId>& ids,
                          std::uint64_t seed, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "# seed=" << seed << "\n";
  for (MessageId id : ids) {
    const auto& m = world.messages.get(id);
    out << "{\"id\":" << m.id << ",\"author\":" << m.author << ",\"origin\":"
        << m.origin_author << ",\"topic\":" << m.topic << ",\"ad\":" << (m.is_advertisement ? 1 : 0)
        << ",\"t\":" << format_double(m.t) << ",\"root\":" << m.words_ref;
    if (m.is_repost())
      out << ",\"parent\":" << m.repost_parent << ",\"src\":"
          << world.messages.get(m.repost_parent).author;
    if (m.words_ref == m.id) {
      out << ",\"words\":[";
      const auto& ws = world.messages.words(m.id);
      for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) out << ',';
        out << ws[i];
      }
      out << ']';
    }
    out << "}\n";
  }
}

void write_exposure_log(const BotState& bot, std::uint64_t seed, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "# seed=" << seed << "\n";
  for (const auto& rec : bot.exposure_log) {
    out << "{\"t\":" << format_double(rec.wake_time) << ",\"messages\":[";
    for (std::size_t i = 0; i < rec.messages.size(); ++i) {
      const auto& m = rec.messages[i];
      if (i) out << ',';
      out << '[' << m.id << ',' << m.topic << ',' << (m.verdict == Verdict::preferred ? 1 : 0)
          << ']';
    }
    out << ']';
    if (rec.new_following) out << ",\"new_following\":" << *rec.new_following;
    if (rec.trigger_message) out << ",\"trigger\":" << *rec.trigger_message;
    out << "}\n";
  }
}

std::vector<ExposureRecord> read_exposure_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open");
  std::vector<ExposureRecord> log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    nlohmann::json j = nlohmann::json::parse(line);
    ExposureRecord rec;
    rec.wake_time = j.at("t").get<double>();
    for (const auto& m : j.at("messages")) {
      ExposedMessage em;
      em.id = m.at(0).get<MessageId>();
      em.topic = m.at(1).get<TopicId>();
      em.verdict = m.at(2).get<int>() == 1 ? Verdict::preferred : Verdict::other;
      rec.messages.push_back(em);
    }
    if (j.contains("new_following")) rec.new_following = j["new_following"].get<UserId>();
    if (j.contains("trigger")) rec.trigger_message = j["trigger"].get<MessageId>();
    log.push_back(std::move(rec));
  }
  return log;
}

void write_followings_csv(const std::vector<BotState>& bots, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "bot_id,user_id,acquired_at,trigger_message_id\n";
  for (const auto& bot : bots)
    for (std::size_t i = 0; i < bot.followings.size(); ++i) {
      out << bot.id << ',' << bot.followings[i] << ',' << format_double(bot.acquired_at[i])
          << ',';
      if (bot.trigger_ids[i] != kNoMessage) out << bot.trigger_ids[i];
      out << "\n";
    }
}

std::vector<ManifestEntry> build_manifest(const fs::path& dir) {
  std::vector<ManifestEntry> entries;
  for (const auto& p : fs::recursive_directory_iterator(dir)) {
    if (!p.is_regular_file()) continue;
    const std::string rel = fs::relative(p.path(), dir).generic_string();
    if (rel == "manifest.txt") continue;
    ManifestEntry e;
    e.relative_path = rel;
    e.bytes = static_cast<std::uint64_t>(p.file_size());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash_file(p.path())));
    e.hash_hex = buf;
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.relative_path < b.relative_path; });
  return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (const auto& e : entries)
    out << e.hash_hex << "  " << e.bytes << "  " << e.relative_path << "\n";
}

}  // namespace polarsim
