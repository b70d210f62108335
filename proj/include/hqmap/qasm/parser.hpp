#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hqmap/qasm/ast.hpp"
#include "hqmap/qasm/lexer.hpp"

namespace hqmap {

namespace detail {

class parser {
public:
  explicit parser(std::string_view src) : lex_(src) { advance(); }

  program run() {
    program p;
    while (cur_.kind != token_kind::end) {
      expect_keyword("module");
      p.modules.push_back(parse_module(p));
    }
    p.main_index = p.module_index("main");
    if (p.main_index < 0)
      throw parse_error(cur_.loc, "missing 'main' module");
    resolve_callees(p);
    return p;
  }

private:
  // name -> (first slot, element count or nullopt for scalar)
  struct binding {
    uint32_t slot;
    std::optional<uint32_t> size;
  };

  void advance() { cur_ = lex_.next(); }

  token expect(token_kind k, const char* what) {
    if (cur_.kind != k)
      throw parse_error(cur_.loc, std::string("expected ") + what);
    token t = cur_;
    advance();
    return t;
  }

  void expect_keyword(std::string_view kw) {
    if (cur_.kind != token_kind::ident || cur_.text != kw)
      throw parse_error(cur_.loc, "expected '" + std::string(kw) + "'");
    advance();
  }

  bool at_keyword(std::string_view kw) const {
    return cur_.kind == token_kind::ident && cur_.text == kw;
  }

  module_def parse_module(const program& p) {
    module_def m;
    m.loc = cur_.loc;
    token name = expect(token_kind::ident, "module name");
    m.name = std::string(name.text);
    if (lookup_gate(m.name))
      throw parse_error(name.loc, "module name '" + m.name + "' is a reserved gate name");
    if (p.find_module(m.name))
      throw parse_error(name.loc, "duplicate module name '" + m.name + "'");

    bindings_.clear();
    next_slot_ = 0;

    expect(token_kind::lparen, "'('");
    if (cur_.kind != token_kind::rparen) {
      for (;;) {
        expect_keyword("qbit");
        token pn = expect(token_kind::ident, "parameter name");
        add_binding(std::string(pn.text), std::nullopt, pn.loc);
        m.params.emplace_back(pn.text);
        if (cur_.kind != token_kind::comma) break;
        advance();
      }
    }
    expect(token_kind::rparen, "')'");
    expect(token_kind::lbrace, "'{'");
    while (cur_.kind != token_kind::rbrace)
      parse_stmt(m);
    advance(); // consume '}'
    return m;
  }

  void add_binding(const std::string& name, std::optional<uint32_t> size, source_loc loc) {
    if (bindings_.count(name))
      throw parse_error(loc, "duplicate qubit name '" + name + "'");
    bindings_[name] = {next_slot_, size};
    next_slot_ += size ? *size : 1;
  }

  void parse_stmt(module_def& m) {
    if (at_keyword("qbit")) {
      parse_decl(m);
      return;
    }
    token name = expect(token_kind::ident, "instruction");
    if (auto g = lookup_gate(name.text)) {
      parse_gate(m, *g, name.loc);
    } else {
      parse_call(m, std::string(name.text), name.loc);
    }
  }

  void parse_decl(module_def& m) {
    source_loc loc = cur_.loc;
    advance(); // qbit
    token name = expect(token_kind::ident, "qubit name");
    qubit_decl d;
    d.name = std::string(name.text);
    d.loc = loc;
    if (cur_.kind == token_kind::lbracket) {
      advance();
      token size = expect(token_kind::integer, "array size");
      if (size.int_value == 0 || size.int_value > (1u << 20))
        throw parse_error(size.loc, "array size out of range");
      d.size = static_cast<uint32_t>(size.int_value);
      expect(token_kind::rbracket, "']'");
    }
    expect(token_kind::semicolon, "';'");
    add_binding(d.name, d.size, name.loc);
    m.locals.push_back(std::move(d));
  }

  qubit_ref parse_qref() {
    token name = expect(token_kind::ident, "qubit reference");
    qubit_ref q;
    q.name = std::string(name.text);
    q.loc = name.loc;
    if (cur_.kind == token_kind::lbracket) {
      advance();
      token idx = expect(token_kind::integer, "array index");
      q.index = static_cast<uint32_t>(idx.int_value);
      expect(token_kind::rbracket, "']'");
    }
    auto it = bindings_.find(q.name);
    if (it == bindings_.end())
      throw parse_error(q.loc, "unknown qubit '" + q.name + "'");
    const binding& b = it->second;
    if (q.index) {
      if (!b.size)
        throw parse_error(q.loc, "'" + q.name + "' is not an array");
      if (*q.index >= *b.size)
        throw parse_error(q.loc, "index " + std::to_string(*q.index) +
                                     " out of bounds for '" + q.name + "[" +
                                     std::to_string(*b.size) + "]'");
      q.slot = static_cast<int32_t>(b.slot + *q.index);
    } else {
      if (b.size)
        throw parse_error(q.loc, "array '" + q.name + "' referenced without index");
      q.slot = static_cast<int32_t>(b.slot);
    }
    return q;
  }

  void parse_gate(module_def& m, gate_kind g, source_loc loc) {
    instr in;
    in.gate = g;
    in.loc = loc;
    expect(token_kind::lparen, "'('");
    if (g == gate_kind::rz) {
      token angle = cur_;
      if (angle.kind != token_kind::floating && angle.kind != token_kind::integer)
        throw parse_error(angle.loc, "Rz requires an angle literal");
      in.angle = angle.float_value;
      advance();
      expect(token_kind::comma, "','");
    }
    in.qubits.push_back(parse_qref());
    if (is_two_qubit(g)) {
      in.kind = instr_kind::gate2;
      expect(token_kind::comma, "','");
      in.qubits.push_back(parse_qref());
      if (in.qubits[0].slot == in.qubits[1].slot)
        throw parse_error(in.qubits[1].loc,
                          std::string(gate_name(g)) + " operands must be distinct");
    } else {
      in.kind = instr_kind::gate1;
    }
    if (cur_.kind == token_kind::comma)
      throw parse_error(cur_.loc, std::string("too many operands for ") +
                                      std::string(gate_name(g)));
    expect(token_kind::rparen, "')'");
    expect(token_kind::semicolon, "';'");
    m.body.push_back(std::move(in));
  }

  void parse_call(module_def& m, std::string callee, source_loc loc) {
    instr in;
    in.kind = instr_kind::call;
    in.callee = std::move(callee);
    in.loc = loc;
    expect(token_kind::lparen, "'('");
    // grammar requires at least one argument: a call with none would be a
    // computation detached from every caller timeline
    in.qubits.push_back(parse_qref());
    while (cur_.kind == token_kind::comma) {
      advance();
      in.qubits.push_back(parse_qref());
    }
    expect(token_kind::rparen, "')'");
    expect(token_kind::semicolon, "';'");
    for (size_t i = 0; i < in.qubits.size(); ++i)
      for (size_t j = i + 1; j < in.qubits.size(); ++j)
        if (in.qubits[i].slot == in.qubits[j].slot)
          throw parse_error(in.qubits[j].loc,
                            "duplicate call argument '" + to_string(in.qubits[j]) + "'");
    m.body.push_back(std::move(in));
  }

  static void resolve_callees(program& p) {
    for (auto& m : p.modules)
      for (auto& in : m.body)
        if (in.kind == instr_kind::call)
          in.callee_index = p.module_index(in.callee); // -1 left for validate
  }

  lexer lex_;
  token cur_;
  std::unordered_map<std::string, binding> bindings_;
  uint32_t next_slot_ = 0;
};

} // namespace detail

inline program parse_program(std::string_view src) {
  return detail::parser(src).run();
}

} // namespace hqmap
