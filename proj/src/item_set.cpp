#include "modkit/item_set.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace modkit {

ItemSet ItemSet::from_items(std::span<const int> items, int n) {
  std::uint64_t mask = 0;
  for (int i : items) {
    if (i < 1 || i > n) throw std::domain_error("item " + std::to_string(i) + " outside 1.." + std::to_string(n));
    mask |= std::uint64_t{1} << (i - 1);
  }
  return {mask, n};
}

std::vector<int> ItemSet::items() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
  return out;
}

WideSet WideSet::full(int n) {
  WideSet s(n);
  for (int w = 0; w < s.word_count(); ++w) {
    const int bits = std::min(64, n - 64 * w);
    s.words_[static_cast<std::size_t>(w)] = low_bits(bits);
  }
  return s;
}

WideSet WideSet::from_items(std::span<const int> items, int n) {
  WideSet s(n);
  for (int i : items) {
    if (i < 1 || i > n) throw std::domain_error("item " + std::to_string(i) + " outside 1.." + std::to_string(n));
    s.insert(i);
  }
  return s;
}

int WideSet::size() const {
  int c = 0;
  for (int w = 0; w < word_count(); ++w) c += std::popcount(words_[static_cast<std::size_t>(w)]);
  return c;
}

bool WideSet::none() const {
  for (int w = 0; w < word_count(); ++w) {
    if (words_[static_cast<std::size_t>(w)] != 0) return false;
  }
  return true;
}

bool WideSet::is_subset_of(const WideSet& other) const {
  check_same(other);
  for (int w = 0; w < word_count(); ++w) {
    const auto i = static_cast<std::size_t>(w);
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

WideSet WideSet::complement() const {
  WideSet out = full(n_);
  for (int w = 0; w < word_count(); ++w) {
    const auto i = static_cast<std::size_t>(w);
    out.words_[i] &= ~words_[i];
  }
  return out;
}

WideSet WideSet::operator|(const WideSet& o) const {
  check_same(o);
  WideSet out(n_);
  for (int w = 0; w < word_count(); ++w) {
    const auto i = static_cast<std::size_t>(w);
    out.words_[i] = words_[i] | o.words_[i];
  }
  return out;
}

WideSet WideSet::operator&(const WideSet& o) const {
  check_same(o);
  WideSet out(n_);
  for (int w = 0; w < word_count(); ++w) {
    const auto i = static_cast<std::size_t>(w);
    out.words_[i] = words_[i] & o.words_[i];
  }
  return out;
}

WideSet WideSet::operator-(const WideSet& o) const {
  check_same(o);
  WideSet out(n_);
  for (int w = 0; w < word_count(); ++w) {
    const auto i = static_cast<std::size_t>(w);
    out.words_[i] = words_[i] & ~o.words_[i];
  }
  return out;
}

std::vector<int> WideSet::items() const {
  std::vector<int> out;
  for (int w = 0; w < word_count(); ++w) {
    for (std::uint64_t m = words_[static_cast<std::size_t>(w)]; m != 0; m &= m - 1) {
      out.push_back(64 * w + std::countr_zero(m) + 1);
    }
  }
  return out;
}

ItemSet WideSet::to_item_set() const {
  if (n_ > kMaxItems) {
    throw CapacityError("cannot narrow a " + std::to_string(n_) + "-item set to a single-word ItemSet");
  }
  return {words_[0], n_};
}

bool operator<(const WideSet& a, const WideSet& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (int w = a.word_count() - 1; w >= 0; --w) {
    const auto i = static_cast<std::size_t>(w);
    if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
  }
  return false;
}

std::size_t WideSet::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(n_);
  for (int w = 0; w < word_count(); ++w) {
    h ^= words_[static_cast<std::size_t>(w)] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Collection::Collection(int n, std::vector<WideSet> sets) : n_(n), sets_(std::move(sets)) {
  for (const auto& s : sets_) {
    if (s.universe() != n_) throw std::domain_error("collection members must share the universe size");
  }
}

void Collection::add(const WideSet& s) {
  if (s.universe() != n_) throw std::domain_error("collection members must share the universe size");
  sets_.push_back(s);
}

Collection Collection::complement() const {
  Collection out(n_);
  out.sets_.reserve(sets_.size());
  for (const auto& s : sets_) out.sets_.push_back(s.complement());
  return out;
}

std::vector<int> Collection::item_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(n_), 0);
  for (const auto& s : sets_) {
    for (int i : s.items()) ++counts[static_cast<std::size_t>(i - 1)];
  }
  return counts;
}

std::optional<int> Collection::uniform_count() const {
  const auto counts = item_counts();
  if (counts.empty()) return 0;
  if (std::all_of(counts.begin(), counts.end(), [&](int c) { return c == counts.front(); })) return counts.front();
  return std::nullopt;
}

double Collection::average_deficit(const std::function<double(const WideSet&)>& f, double top) const {
  if (sets_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : sets_) total += top - f(s);
  return total / static_cast<double>(sets_.size());
}

double Collection::average_surplus(const std::function<double(const WideSet&)>& f, double top) const {
  if (sets_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : sets_) total += f(s) + top;
  return total / static_cast<double>(sets_.size());
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

WideSet parse_set(const std::string& raw, int n) {
  std::string text = trim(raw);
  WideSet out(n);
  if (text.empty() || text == "{}") return out;

  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    int bit = 0;
    for (auto it = text.rbegin(); it != text.rend() - 2; ++it) {
      if (*it == '_') continue;
      const int c = std::tolower(static_cast<unsigned char>(*it));
      int v = 0;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        v = c - 'a' + 10;
      } else {
        throw std::invalid_argument("bad hex digit in set literal: " + raw);
      }
      for (int b = 0; b < 4; ++b, ++bit) {
        if ((v >> b) & 1) {
          if (bit >= n) throw std::domain_error("set literal has bits outside the universe: " + raw);
          out.insert(bit + 1);
        }
      }
    }
    return out;
  }

  if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
    int bit = 0;
    for (auto it = text.rbegin(); it != text.rend() - 2; ++it, ++bit) {
      if (*it == '1') {
        if (bit >= n) throw std::domain_error("set literal has bits outside the universe: " + raw);
        out.insert(bit + 1);
      } else if (*it != '0') {
        throw std::invalid_argument("bad binary digit in set literal: " + raw);
      }
    }
    return out;
  }

  if (text.front() == '{' && text.back() == '}') text = text.substr(1, text.size() - 2);
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::size_t used = 0;
    const int item = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad item in set literal: " + raw);
    if (item < 1 || item > n) throw std::domain_error("item " + tok + " outside 1.." + std::to_string(n));
    out.insert(item);
  }
  return out;
}

std::string format_set(const WideSet& s) {
  std::string out = "{";
  bool first = true;
  for (int i : s.items()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace modkit
