#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tlc {

using NodeId = int;

// Immutable dynamic value: message payloads, counters, component states.
// Totally ordered by kind tag, then structurally, so sets and maps iterate
// deterministically.
class Value {
 public:
  enum class Kind : std::uint8_t {
    Bottom = 0,
    Boolean,
    Integer,
    String,
    Node,
    Unit,
    Tuple,
    Sequence,
    Set,
    Map,
  };

  using List = std::vector<Value>;
  using Entries = std::vector<std::pair<Value, Value>>;

  Value() = default;  // bottom

  static Value bottom() { return Value(); }
  static Value boolean(bool b);
  static Value integer(std::int64_t i);
  static Value string(std::string s);
  static Value node(NodeId n);
  static Value unit();
  static Value tuple(List items);
  static Value sequence(List items);
  static Value set(List items);      // sorts and deduplicates
  static Value map(Entries entries); // sorts by key; duplicate keys keep last

  Kind kind() const { return kind_; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }

  bool as_bool() const;
  std::int64_t as_int() const;           // Integer or Node
  const std::string& as_string() const;
  NodeId as_node() const;                // Node or Integer in node position
  const List& items() const;             // Tuple, Sequence, Set
  const Entries& entries() const;        // Map

  std::size_t size() const;  // elements of tuple/sequence/set/map

  // Set operations (value semantics; *this unchanged).
  bool contains(const Value& v) const;
  Value with_inserted(const Value& v) const;
  Value with_erased(const Value& v) const;
  Value set_union(const Value& other) const;
  Value set_intersect(const Value& other) const;
  bool subset_of(const Value& other) const;

  // Map operations.
  std::optional<Value> get(const Value& key) const;
  Value with_entry(const Value& key, const Value& v) const;
  bool has_key(const Value& key) const;

  int compare(const Value& other) const;  // canonical total order
  bool operator==(const Value& other) const { return compare(other) == 0; }
  bool operator!=(const Value& other) const { return compare(other) != 0; }
  bool operator<(const Value& other) const { return compare(other) < 0; }

  std::string to_string() const;

 private:
  Kind kind_ = Kind::Bottom;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::shared_ptr<const std::string> str_;
  std::shared_ptr<const List> list_;
  std::shared_ptr<const Entries> entries_;
};

}  // namespace tlc
