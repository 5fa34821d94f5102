#include <fmt/format.h>

#include "castbridge/syntax.hpp"

namespace castbridge::syntax {
namespace {

// Binding strength, loosest first. A child is parenthesized exactly when its
// level is below the minimum its position requires:
//
//   BoolOp values         > own level (same-op nesting would flatten)
//   not operand           >= Not
//   Compare operands      > Compare   (nested compares would chain)
//   BinOp left / right    >= own / > own  (left associative)
//   unary minus operand   >= Unary
//   call/attr/subscript   >= Postfix on the value; int constants get parens
//                          before '.' so "1.x" never lexes as a float
enum Level : int { kOr = 1, kAnd, kNot, kCompare, kArith, kTerm, kUnary, kPostfix, kAtom };

int level(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoolOp>) {
          return n.op == BoolOpKind::Or ? kOr : kAnd;
        } else if constexpr (std::is_same_v<T, UnaryOp>) {
          return n.op == UnaryOpKind::Not ? kNot : kUnary;
        } else if constexpr (std::is_same_v<T, Compare>) {
          return kCompare;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          return (n.op == BinOpKind::Add || n.op == BinOpKind::Sub) ? kArith : kTerm;
        } else if constexpr (std::is_same_v<T, Attribute> || std::is_same_v<T, Call> ||
                             std::is_same_v<T, Subscript>) {
          return kPostfix;
        } else {
          return kAtom;
        }
      },
      e.node);
}

std::string_view cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::NotEq: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::LtE: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::GtE: return ">=";
    case CmpOp::In: return "in";
    case CmpOp::NotIn: return "not in";
  }
  return "?";
}

std::string_view binop_text(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Mult: return "*";
    case BinOpKind::Div: return "/";
  }
  return "?";
}

std::string quote(const std::string& value) {
  std::string out = "'";
  for (std::size_t i = 0; i < value.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(value[i]);
    switch (c) {
      case '\\': out += "\\\\"; continue;
      case '\'': out += "\\'"; continue;
      case '\n': out += "\\n"; continue;
      case '\t': out += "\\t"; continue;
      case '\r': out += "\\r"; continue;
      default: break;
    }
    // A second space in a row would be collapsed by the bracket reader.
    if (c == ' ' && i > 0 && value[i - 1] == ' ') {
      out += "\\x20";
      continue;
    }
    if (c == '[' || c == ']') {
      bool space_before = i > 0 && value[i - 1] == ' ';
      bool space_after = i + 1 < value.size() && value[i + 1] == ' ';
      if (space_before && space_after) {
        out += c == '[' ? "\\x5b" : "\\x5d";
        continue;
      }
    }
    if (c < 0x20 || c == 0x7f) {
      out += fmt::format("\\x{:02x}", c);
      continue;
    }
    out += static_cast<char>(c);
  }
  out += '\'';
  return out;
}

std::string render(const Expr& e, int min_level);

std::string join(const std::vector<Expr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += render(items[i], 0);
  }
  return out;
}

std::string render_bare(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Name>) {
          return n.id;
        } else if constexpr (std::is_same_v<T, Attribute>) {
          std::string base = render(*n.value, kPostfix);
          if (n.value->template is<Constant>() &&
              n.value->template as<Constant>().kind == ConstKind::Integer)
            base = "(" + base + ")";
          return base + "." + n.attr;
        } else if constexpr (std::is_same_v<T, Call>) {
          std::string out = render(*n.func, kPostfix) + "(" + join(n.args);
          for (std::size_t i = 0; i < n.keywords.size(); ++i) {
            if (i || !n.args.empty()) out += ", ";
            out += n.keywords[i].name + "=" + render(*n.keywords[i].value, 0);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Constant>) {
          return n.kind == ConstKind::String ? quote(n.text) : n.text;
        } else if constexpr (std::is_same_v<T, ListLit>) {
          return "[" + join(n.elts) + "]";
        } else if constexpr (std::is_same_v<T, TupleLit>) {
          if (n.elts.size() == 1) return "(" + render(n.elts[0], 0) + ",)";
          return "(" + join(n.elts) + ")";
        } else if constexpr (std::is_same_v<T, BoolOp>) {
          int own = n.op == BoolOpKind::Or ? kOr : kAnd;
          std::string_view sep = n.op == BoolOpKind::Or ? " or " : " and ";
          std::string out;
          for (std::size_t i = 0; i < n.values.size(); ++i) {
            if (i) out += sep;
            out += render(n.values[i], own + 1);
          }
          return out;
        } else if constexpr (std::is_same_v<T, UnaryOp>) {
          if (n.op == UnaryOpKind::Not) return "not " + render(*n.operand, kNot);
          return "-" + render(*n.operand, kUnary);
        } else if constexpr (std::is_same_v<T, Compare>) {
          std::string out = render(*n.left, kCompare + 1);
          for (std::size_t i = 0; i < n.ops.size(); ++i)
            out += fmt::format(" {} {}", cmp_text(n.ops[i]), render(n.comparators[i], kCompare + 1));
          return out;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          int own = (n.op == BinOpKind::Add || n.op == BinOpKind::Sub) ? kArith : kTerm;
          return fmt::format("{} {} {}", render(*n.left, own), binop_text(n.op),
                             render(*n.right, own + 1));
        } else {
          static_assert(std::is_same_v<T, Subscript>);
          return render(*n.value, kPostfix) + "[" + render(*n.index, 0) + "]";
        }
      },
      e.node);
}

std::string render(const Expr& e, int min_level) {
  std::string s = render_bare(e);
  if (level(e) < min_level) return "(" + s + ")";
  return s;
}

void render_block(const std::vector<Stmt>& body, int depth, std::string& out);

void render_stmt(const Stmt& s, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Assign>) {
          out += pad;
          for (const auto& t : n.targets) out += render(t, 0) + " = ";
          out += render(n.value, 0) + "\n";
        } else if constexpr (std::is_same_v<T, AugAssign>) {
          out += pad + render(n.target, 0) + " += " + render(n.value, 0) + "\n";
        } else if constexpr (std::is_same_v<T, AnnAssign>) {
          out += pad + render(n.target, 0) + ": " + render(n.annotation, 0);
          if (!n.value.empty()) out += " = " + render(n.value.front(), 0);
          out += "\n";
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          out += pad + render(n.value, 0) + "\n";
        } else if constexpr (std::is_same_v<T, If>) {
          const If* node = &n;
          std::string keyword = "if";
          while (true) {
            out += pad + keyword + " " + render(node->test, 0) + ":\n";
            render_block(node->body, depth + 1, out);
            if (node->orelse.size() == 1 && node->orelse.front().template is<If>()) {
              node = &node->orelse.front().template as<If>();
              keyword = "elif";
              continue;
            }
            if (!node->orelse.empty()) {
              out += pad + "else:\n";
              render_block(node->orelse, depth + 1, out);
            }
            break;
          }
        } else if constexpr (std::is_same_v<T, For>) {
          out += pad + "for " + render(n.target, 0) + " in " + render(n.iter, 0) + ":\n";
          render_block(n.body, depth + 1, out);
          if (!n.orelse.empty()) {
            out += pad + "else:\n";
            render_block(n.orelse, depth + 1, out);
          }
        } else {
          static_assert(std::is_same_v<T, While>);
          out += pad + "while " + render(n.test, 0) + ":\n";
          render_block(n.body, depth + 1, out);
          if (!n.orelse.empty()) {
            out += pad + "else:\n";
            render_block(n.orelse, depth + 1, out);
          }
        }
      },
      s.node);
}

void render_block(const std::vector<Stmt>& body, int depth, std::string& out) {
  for (const auto& s : body) render_stmt(s, depth, out);
}

}  // namespace

std::string unparse(const Program& program) {
  std::string out;
  render_block(program.body, 0, out);
  return out;
}

std::string unparse(const Stmt& stmt) {
  std::string out;
  render_stmt(stmt, 0, out);
  out.pop_back();  // trailing newline
  return out;
}

std::string unparse(const Expr& expr) { return render(expr, 0); }

}  // namespace castbridge::syntax
