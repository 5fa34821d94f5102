#pragma once

// Typed AST for the Python subset accepted by the toolkit.
//
// Statements: Assign, AugAssign (+= only), AnnAssign, ExprStmt, If, For,
// While. Expressions: Name, Attribute, Call, Constant, ListLit, TupleLit,
// BoolOp, UnaryOp, Compare, BinOp, Subscript. Anything else is rejected by
// the parser as an unsupported construct.
//
// All node types are plain values with structural equality.

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace castbridge::syntax {

/// Owning, deep-copying pointer. Lets recursive variants stay value types.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T& operator*() { return *ptr_; }
  T* operator->() { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Expr;
struct Stmt;

enum class ConstKind { String, Integer, Float, Boolean, None };
enum class BoolOpKind { And, Or };
enum class UnaryOpKind { Not, Neg };
enum class CmpOp { Eq, NotEq, Lt, LtE, Gt, GtE, In, NotIn };
enum class BinOpKind { Add, Sub, Mult, Div };

struct Name {
  std::string id;
  bool operator==(const Name&) const = default;
};

struct Attribute {
  Box<Expr> value;
  std::string attr;
  bool operator==(const Attribute&) const = default;
};

struct Keyword {
  std::string name;
  Box<Expr> value;
  bool operator==(const Keyword&) const = default;
};

struct Call {
  Box<Expr> func;
  std::vector<Expr> args;
  std::vector<Keyword> keywords;
  bool operator==(const Call&) const = default;
};

/// For strings `text` holds the decoded value; for numbers the lexeme as
/// written; for booleans "True"/"False"; for None "None".
struct Constant {
  ConstKind kind;
  std::string text;
  bool operator==(const Constant&) const = default;
};

struct ListLit {
  std::vector<Expr> elts;
  bool operator==(const ListLit&) const = default;
};

struct TupleLit {
  std::vector<Expr> elts;
  bool operator==(const TupleLit&) const = default;
};

/// values.size() >= 2.
struct BoolOp {
  BoolOpKind op;
  std::vector<Expr> values;
  bool operator==(const BoolOp&) const = default;
};

struct UnaryOp {
  UnaryOpKind op;
  Box<Expr> operand;
  bool operator==(const UnaryOp&) const = default;
};

/// ops.size() == comparators.size() >= 1.
struct Compare {
  Box<Expr> left;
  std::vector<CmpOp> ops;
  std::vector<Expr> comparators;
  bool operator==(const Compare&) const = default;
};

struct BinOp {
  Box<Expr> left;
  BinOpKind op;
  Box<Expr> right;
  bool operator==(const BinOp&) const = default;
};

struct Subscript {
  Box<Expr> value;
  Box<Expr> index;
  bool operator==(const Subscript&) const = default;
};

struct Expr {
  using Node = std::variant<Name, Attribute, Call, Constant, ListLit, TupleLit, BoolOp, UnaryOp,
                            Compare, BinOp, Subscript>;
  Node node;

  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <class T>
  const T& as() const { return std::get<T>(node); }

  bool operator==(const Expr&) const = default;
};

/// `a = b = value` keeps targets in source order.
struct Assign {
  std::vector<Expr> targets;
  Expr value;
  bool operator==(const Assign&) const = default;
};

/// Only `+=` is in the subset.
struct AugAssign {
  Expr target;
  Expr value;
  bool operator==(const AugAssign&) const = default;
};

struct AnnAssign {
  Expr target;
  Expr annotation;
  std::vector<Expr> value;  // zero or one element
  bool operator==(const AnnAssign&) const = default;
};

struct ExprStmt {
  Expr value;
  bool operator==(const ExprStmt&) const = default;
};

struct If {
  Expr test;
  std::vector<Stmt> body;
  std::vector<Stmt> orelse;
  bool operator==(const If&) const = default;
};

struct For {
  Expr target;
  Expr iter;
  std::vector<Stmt> body;
  std::vector<Stmt> orelse;
  bool operator==(const For&) const = default;
};

struct While {
  Expr test;
  std::vector<Stmt> body;
  std::vector<Stmt> orelse;
  bool operator==(const While&) const = default;
};

struct Stmt {
  using Node = std::variant<Assign, AugAssign, AnnAssign, ExprStmt, If, For, While>;
  Node node;

  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <class T>
  const T& as() const { return std::get<T>(node); }

  bool operator==(const Stmt&) const = default;
};

struct Program {
  std::vector<Stmt> body;
  bool operator==(const Program&) const = default;
};

// Construction helpers, mostly for tests and the cAST expander.
inline Expr name(std::string id) { return Expr{Name{std::move(id)}}; }
inline Expr str_const(std::string value) { return Expr{Constant{ConstKind::String, std::move(value)}}; }
inline Expr int_const(std::string lexeme) { return Expr{Constant{ConstKind::Integer, std::move(lexeme)}}; }

}  // namespace castbridge::syntax
