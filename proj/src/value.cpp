#include "tlc/value.hpp"

#include <algorithm>
#include <sstream>

#include "tlc/error.hpp"

namespace tlc {

namespace {

const Value::List kEmptyList;
const Value::Entries kEmptyEntries;

}  // namespace

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Boolean;
  v.bool_ = b;
  return v;
}

Value Value::integer(std::int64_t i) {
  Value v;
  v.kind_ = Kind::Integer;
  v.int_ = i;
  return v;
}

Value Value::string(std::string s) {
  Value v;
  v.kind_ = Kind::String;
  v.str_ = std::make_shared<const std::string>(std::move(s));
  return v;
}

Value Value::node(NodeId n) {
  Value v;
  v.kind_ = Kind::Node;
  v.int_ = n;
  return v;
}

Value Value::unit() {
  Value v;
  v.kind_ = Kind::Unit;
  return v;
}

Value Value::tuple(List items) {
  Value v;
  v.kind_ = Kind::Tuple;
  v.list_ = std::make_shared<const List>(std::move(items));
  return v;
}

Value Value::sequence(List items) {
  Value v;
  v.kind_ = Kind::Sequence;
  v.list_ = std::make_shared<const List>(std::move(items));
  return v;
}

Value Value::set(List items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Value v;
  v.kind_ = Kind::Set;
  v.list_ = std::make_shared<const List>(std::move(items));
  return v;
}

Value Value::map(Entries entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Entries dedup;
  dedup.reserve(entries.size());
  for (auto& e : entries) {
    if (!dedup.empty() && dedup.back().first == e.first) {
      dedup.back().second = e.second;
    } else {
      dedup.push_back(e);
    }
  }
  Value v;
  v.kind_ = Kind::Map;
  v.entries_ = std::make_shared<const Entries>(std::move(dedup));
  return v;
}

bool Value::as_bool() const {
  if (kind_ != Kind::Boolean) throw Error("eval", "not a boolean: " + to_string());
  return bool_;
}

std::int64_t Value::as_int() const {
  if (kind_ != Kind::Integer && kind_ != Kind::Node)
    throw Error("eval", "not an integer: " + to_string());
  return int_;
}

const std::string& Value::as_string() const {
  if (kind_ != Kind::String) throw Error("eval", "not a string: " + to_string());
  return *str_;
}

NodeId Value::as_node() const {
  if (kind_ != Kind::Node && kind_ != Kind::Integer)
    throw Error("eval", "not a node id: " + to_string());
  return static_cast<NodeId>(int_);
}

const Value::List& Value::items() const {
  if (kind_ != Kind::Tuple && kind_ != Kind::Sequence && kind_ != Kind::Set)
    throw Error("eval", "no elements in: " + to_string());
  return list_ ? *list_ : kEmptyList;
}

const Value::Entries& Value::entries() const {
  if (kind_ != Kind::Map) throw Error("eval", "not a map: " + to_string());
  return entries_ ? *entries_ : kEmptyEntries;
}

std::size_t Value::size() const {
  if (kind_ == Kind::Map) return entries().size();
  return items().size();
}

bool Value::contains(const Value& v) const {
  const auto& xs = items();
  if (kind_ == Kind::Set) return std::binary_search(xs.begin(), xs.end(), v);
  return std::find(xs.begin(), xs.end(), v) != xs.end();
}

Value Value::with_inserted(const Value& v) const {
  List xs = items();
  xs.push_back(v);
  return set(std::move(xs));
}

Value Value::with_erased(const Value& v) const {
  List xs;
  for (const auto& x : items())
    if (x != v) xs.push_back(x);
  Value out;
  out.kind_ = Kind::Set;
  out.list_ = std::make_shared<const List>(std::move(xs));
  return out;
}

Value Value::set_union(const Value& other) const {
  List xs = items();
  const auto& ys = other.items();
  xs.insert(xs.end(), ys.begin(), ys.end());
  return set(std::move(xs));
}

Value Value::set_intersect(const Value& other) const {
  List xs;
  for (const auto& x : items())
    if (other.contains(x)) xs.push_back(x);
  return set(std::move(xs));
}

bool Value::subset_of(const Value& other) const {
  for (const auto& x : items())
    if (!other.contains(x)) return false;
  return true;
}

std::optional<Value> Value::get(const Value& key) const {
  for (const auto& [k, v] : entries())
    if (k == key) return v;
  return std::nullopt;
}

Value Value::with_entry(const Value& key, const Value& v) const {
  Entries es = entries();
  for (auto& e : es) {
    if (e.first == key) {
      e.second = v;
      return map(std::move(es));
    }
  }
  es.emplace_back(key, v);
  return map(std::move(es));
}

bool Value::has_key(const Value& key) const { return get(key).has_value(); }

int Value::compare(const Value& other) const {
  if (kind_ != other.kind_)
    return static_cast<int>(kind_) < static_cast<int>(other.kind_) ? -1 : 1;
  switch (kind_) {
    case Kind::Bottom:
    case Kind::Unit:
      return 0;
    case Kind::Boolean:
      return bool_ == other.bool_ ? 0 : (bool_ < other.bool_ ? -1 : 1);
    case Kind::Integer:
    case Kind::Node:
      return int_ == other.int_ ? 0 : (int_ < other.int_ ? -1 : 1);
    case Kind::String: {
      int c = str_->compare(*other.str_);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Tuple:
    case Kind::Sequence:
    case Kind::Set: {
      const auto& a = items();
      const auto& b = other.items();
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = a[i].compare(b[i]);
        if (c != 0) return c;
      }
      return a.size() == b.size() ? 0 : (a.size() < b.size() ? -1 : 1);
    }
    case Kind::Map: {
      const auto& a = entries();
      const auto& b = other.entries();
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = a[i].first.compare(b[i].first);
        if (c != 0) return c;
        c = a[i].second.compare(b[i].second);
        if (c != 0) return c;
      }
      return a.size() == b.size() ? 0 : (a.size() < b.size() ? -1 : 1);
    }
  }
  return 0;
}

std::string Value::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Bottom:
      os << "_|_";
      break;
    case Kind::Boolean:
      os << (bool_ ? "true" : "false");
      break;
    case Kind::Integer:
      os << int_;
      break;
    case Kind::Node:
      os << "#" << int_;
      break;
    case Kind::String:
      os << '"' << *str_ << '"';
      break;
    case Kind::Unit:
      os << "()";
      break;
    case Kind::Tuple:
    case Kind::Sequence:
    case Kind::Set: {
      const char* open = kind_ == Kind::Tuple ? "<" : (kind_ == Kind::Sequence ? "[" : "{");
      const char* close = kind_ == Kind::Tuple ? ">" : (kind_ == Kind::Sequence ? "]" : "}");
      os << open;
      bool first = true;
      for (const auto& x : items()) {
        if (!first) os << ", ";
        first = false;
        os << x.to_string();
      }
      os << close;
      break;
    }
    case Kind::Map: {
      os << "{";
      bool first = true;
      for (const auto& [k, v] : entries()) {
        if (!first) os << ", ";
        first = false;
        os << k.to_string() << " -> " << v.to_string();
      }
      os << "}";
      break;
    }
  }
  return os.str();
}

}  // namespace tlc
