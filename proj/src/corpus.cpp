#include "spampipe/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include "spampipe/errors.hpp"

namespace fs = std::filesystem;

namespace spampipe {

std::size_t Corpus::count(Label l) const {
  return static_cast<std::size_t>(
      std::count_if(documents.begin(), documents.end(),
                    [l](const Document& d) { return d.label == l; }));
}

namespace {

std::string lower_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Lossy UTF-8 validation: invalid sequences become U+FFFD.
std::string decode_lossy_utf8(const std::string& raw) {
  static const std::string kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t len;
    std::uint32_t cp;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      out += kReplacement;
      ++i;
      continue;
    }
    bool ok = i + len <= n;
    for (std::size_t j = 1; ok && j < len; ++j) {
      unsigned char cc = static_cast<unsigned char>(raw[i + j]);
      if ((cc & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (ok) {
      // reject overlong forms and surrogates
      if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
          (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
          (cp >= 0xD800 && cp <= 0xDFFF)) {
        ok = false;
      }
    }
    if (ok) {
      out.append(raw, i, len);
      i += len;
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

std::string read_file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Directory-name -> label by substring; "spam" wins on a double match.
bool dir_label(const std::string& name, Label* out) {
  std::string lo = lower_ascii(name);
  if (lo.find("spam") != std::string::npos) {
    *out = Label::Spam;
    return true;
  }
  if (lo.find("ham") != std::string::npos) {
    *out = Label::Ham;
    return true;
  }
  return false;
}

bool parse_label_token(const std::string& tok, Label* out) {
  std::string lo = lower_ascii(tok);
  if (lo == "spam") {
    *out = Label::Spam;
    return true;
  }
  if (lo == "ham") {
    *out = Label::Ham;
    return true;
  }
  return false;
}

void warn(LoadReport* report, const std::string& msg) {
  if (report) report->warnings.push_back(msg);
}

}  // namespace

std::string parse_email(const std::string& raw, bool strip_headers) {
  std::string text = decode_lossy_utf8(raw);
  if (!strip_headers) return text;

  // Header block ends at the first empty line (tolerating CRLF).
  std::size_t body_start = std::string::npos;
  std::size_t header_end = text.size();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::size_t line_end = (eol == std::string::npos) ? text.size() : eol;
    std::size_t len = line_end - pos;
    if (len > 0 && text[line_end - 1] == '\r') --len;
    if (len == 0) {
      header_end = pos;
      body_start = (eol == std::string::npos) ? text.size() : eol + 1;
      break;
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }

  std::string headers = text.substr(0, header_end);
  std::string body = (body_start == std::string::npos) ? "" : text.substr(body_start);

  std::string subject;
  std::istringstream hs(headers);
  std::string line;
  while (std::getline(hs, line)) {
    if (line.size() >= 8 && lower_ascii(line.substr(0, 8)) == "subject:") {
      subject = trim(line.substr(8));
      break;
    }
  }
  return subject + "\n" + body;
}

Corpus load_spamassassin_dir(const fs::path& root, bool strip_headers, LoadReport* report) {
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw InputError("corpus root does not exist: " + root.string());
  }
  // Collect (path, label) for every file under a labeled subdirectory,
  // labeling by the deepest matching directory on the relative path.
  std::vector<std::pair<std::string, Label>> entries;
  for (const auto& sub : fs::directory_iterator(root)) {
    if (!sub.is_directory()) continue;
    Label top_label;
    bool top_ok = dir_label(sub.path().filename().string(), &top_label);
    if (!top_ok) {
      warn(report, "skipping directory (no spam/ham in name): " + sub.path().string());
      continue;
    }
    for (auto it = fs::recursive_directory_iterator(sub.path());
         it != fs::recursive_directory_iterator(); ++it) {
      if (!it->is_regular_file()) continue;
      Label label = top_label;
      // deepest directory-name match along the path wins
      fs::path rel = fs::relative(it->path().parent_path(), root);
      for (const auto& part : rel) {
        Label l;
        if (dir_label(part.string(), &l)) label = l;
      }
      entries.emplace_back(it->path().string(), label);
    }
  }
  std::sort(entries.begin(), entries.end());

  Corpus corpus;
  for (const auto& [path, label] : entries) {
    std::string raw;
    try {
      raw = read_file_bytes(path);
    } catch (const InputError& e) {
      warn(report, std::string("skipping unreadable file: ") + path);
      if (report) ++report->skipped_files;
      continue;
    }
    Document d;
    d.id = static_cast<std::uint32_t>(corpus.documents.size());
    d.source = path;
    d.label = label;
    d.text = parse_email(raw, strip_headers);
    corpus.documents.push_back(std::move(d));
  }
  if (corpus.documents.empty()) {
    warn(report, "no documents found under " + root.string());
  }
  return corpus;
}

Corpus load_trec_index(const fs::path& index_path, bool strip_headers, LoadReport* report) {
  std::ifstream in(index_path);
  if (!in) throw InputError("cannot read index file: " + index_path.string());
  fs::path base = index_path.parent_path();

  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t ws = t.find_first_of(" \t");
    if (ws == std::string::npos) {
      throw InputError("index line " + std::to_string(lineno) + ": expected \"<label> <path>\"");
    }
    std::string label_tok = t.substr(0, ws);
    std::string rel = trim(t.substr(ws));
    Label label;
    if (!parse_label_token(label_tok, &label)) {
      throw InputError("index line " + std::to_string(lineno) + ": unknown label \"" +
                       label_tok + "\"");
    }
    fs::path msg_path = base / fs::path(rel).lexically_normal();
    std::string raw;
    try {
      raw = read_file_bytes(msg_path);
    } catch (const InputError&) {
      warn(report, "index line " + std::to_string(lineno) + ": missing file " + msg_path.string());
      if (report) ++report->skipped_files;
      continue;
    }
    Document d;
    d.id = static_cast<std::uint32_t>(corpus.documents.size());
    d.source = msg_path.string();
    d.label = label;
    d.text = parse_email(raw, strip_headers);
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

Corpus load_tsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read tsv file: " + path.string());
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("tsv line " + std::to_string(lineno) + ": no tab separator");
    }
    Label label;
    if (!parse_label_token(line.substr(0, tab), &label)) {
      throw InputError("tsv line " + std::to_string(lineno) + ": unknown label \"" +
                       line.substr(0, tab) + "\"");
    }
    Document d;
    d.id = static_cast<std::uint32_t>(corpus.documents.size());
    d.source = path.string() + ":" + std::to_string(lineno);
    d.label = label;
    d.text = line.substr(tab + 1);
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

void save_tsv(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write tsv file: " + path.string());
  for (const Document& d : corpus.documents) {
    std::string text = d.text;
    for (char& c : text) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    out << label_name(d.label) << '\t' << text << '\n';
  }
}

void SyntheticSpec::validate() const {
  if (n_spam < 1 || n_ham < 1) throw ConfigError("synthetic: n_spam and n_ham must be >= 1");
  if (subtopics_per_label < 1) throw ConfigError("synthetic: subtopics_per_label must be >= 1");
  if (vocab_per_subtopic < 1) throw ConfigError("synthetic: vocab_per_subtopic must be >= 1");
  if (shared_vocab < 1) throw ConfigError("synthetic: shared_vocab must be >= 1");
  if (doc_len_min < 1 || doc_len_min > doc_len_max) {
    throw ConfigError("synthetic: need 1 <= doc_len_min <= doc_len_max");
  }
  if (noise_ratio < 0.0 || noise_ratio > 1.0) {
    throw ConfigError("synthetic: noise_ratio must be in [0,1]");
  }
}

namespace {

// Portable draws: libstdc++ and libc++ disagree on distribution output,
// the raw engine stream is specified.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

}  // namespace

SyntheticCorpus generate_synthetic_with_truth(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  auto pool_word = [&](char prefix, std::size_t topic, std::size_t i) {
    return std::string(1, prefix) + std::to_string(topic) + "w" + std::to_string(i);
  };

  SyntheticCorpus out;
  std::size_t total = spec.n_spam + spec.n_ham;
  out.corpus.documents.reserve(total);
  out.subtopic.reserve(total);

  for (std::size_t n = 0; n < total; ++n) {
    Label label = n < spec.n_spam ? Label::Spam : Label::Ham;
    char prefix = label == Label::Spam ? 's' : 'h';
    std::size_t topic = draw_below(rng, spec.subtopics_per_label);
    std::size_t len = spec.doc_len_min +
                      draw_below(rng, spec.doc_len_max - spec.doc_len_min + 1);
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      if (i) text += ' ';
      if (draw_unit(rng) < spec.noise_ratio) {
        text += "cw" + std::to_string(draw_below(rng, spec.shared_vocab));
      } else {
        text += pool_word(prefix, topic, draw_below(rng, spec.vocab_per_subtopic));
      }
    }
    Document d;
    d.id = static_cast<std::uint32_t>(n);
    d.source = "synthetic:" + std::to_string(n);
    d.label = label;
    d.text = std::move(text);
    out.corpus.documents.push_back(std::move(d));
    out.subtopic.push_back(topic);
  }
  return out;
}

Corpus generate_synthetic(const SyntheticSpec& spec) {
  return generate_synthetic_with_truth(spec).corpus;
}

}  // namespace spampipe
