#include "nodegen/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace nodegen {

class ExprParser {
  public:
    ExprParser(const std::string& src, Expression& out) : src_(src), out_(out) {}

    void run() {
        parse_sum();
        skip_ws();
        if (pos_ != src_.size()) fail("trailing characters");
    }

  private:
    const std::string& src_;
    Expression& out_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("expression error at position " + std::to_string(pos_) +
                                    ": " + what + " in '" + src_ + "'");
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    void emit(Expression::Op op, double v = 0) { out_.prog_.push_back({op, v}); }

    // sum := product (('+'|'-') product)*
    void parse_sum() {
        parse_product();
        while (true) {
            if (eat('+')) {
                parse_product();
                emit(Expression::Op::add);
            } else if (eat('-')) {
                parse_product();
                emit(Expression::Op::sub);
            } else {
                return;
            }
        }
    }

    // product := power (('*'|'/') power)*
    void parse_product() {
        parse_power();
        while (true) {
            if (eat('*')) {
                parse_power();
                emit(Expression::Op::mul);
            } else if (eat('/')) {
                parse_power();
                emit(Expression::Op::div);
            } else {
                return;
            }
        }
    }

    // power := unary ('^' power)?   (right associative)
    void parse_power() {
        parse_unary();
        if (eat('^')) {
            parse_power();
            emit(Expression::Op::pow);
        }
    }

    void parse_unary() {
        if (eat('-')) {
            parse_unary();
            emit(Expression::Op::neg);
            return;
        }
        eat('+');
        parse_primary();
    }

    void parse_primary() {
        char c = peek();
        if (c == '(') {
            eat('(');
            parse_sum();
            if (!eat(')')) fail("missing ')'");
            return;
        }
        if (c == 'x' || c == 'y' || c == 'z') {
            ++pos_;
            emit(Expression::Op::push_var, static_cast<double>(c - 'x'));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            emit(Expression::Op::push_const, v);
            return;
        }
        fail("expected number, variable or '('");
    }
};

Expression Expression::parse(const std::string& src) {
    Expression e;
    e.src_ = src;
    ExprParser(src, e).run();
    return e;
}

double Expression::eval(const double* vars, int nvars) const {
    double stack[64];
    int top = 0;
    for (const Instr& in : prog_) {
        switch (in.op) {
            case Op::push_const:
                stack[top++] = in.value;
                break;
            case Op::push_var: {
                int i = static_cast<int>(in.value);
                if (i >= nvars)
                    throw std::invalid_argument("expression '" + src_ + "' uses variable '" +
                                                std::string(1, char('x' + i)) +
                                                "' beyond dimension " + std::to_string(nvars));
                stack[top++] = vars[i];
                break;
            }
            case Op::add:
                --top;
                stack[top - 1] += stack[top];
                break;
            case Op::sub:
                --top;
                stack[top - 1] -= stack[top];
                break;
            case Op::mul:
                --top;
                stack[top - 1] *= stack[top];
                break;
            case Op::div:
                --top;
                stack[top - 1] /= stack[top];
                break;
            case Op::pow:
                --top;
                stack[top - 1] = std::pow(stack[top - 1], stack[top]);
                break;
            case Op::neg:
                stack[top - 1] = -stack[top - 1];
                break;
        }
        if (top >= 63) throw std::invalid_argument("expression too deep: " + src_);
    }
    return top == 1 ? stack[0] : throw std::invalid_argument("malformed expression: " + src_);
}

}  // namespace nodegen
