#pragma once

#include <string>
#include <vector>

namespace nodegen {

// Tiny arithmetic expression over variables x, y, z with + - * / ^ and
// parentheses. Parsed once into a postfix program, evaluated per point.
class Expression {
  public:
    // Throws std::invalid_argument on malformed input.
    static Expression parse(const std::string& src);

    // vars[0..nvars) bind to x, y, z in that order; unbound variables are an
    // eval error.
    double eval(const double* vars, int nvars) const;

    const std::string& source() const { return src_; }

  private:
    enum class Op : unsigned char { push_const, push_var, add, sub, mul, div, pow, neg };
    struct Instr {
        Op op;
        double value = 0;  // constant or variable index
    };

    std::string src_;
    std::vector<Instr> prog_;

    friend class ExprParser;
};

}  // namespace nodegen
