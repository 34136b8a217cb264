#include "confcoord/tensorcalc/expression.hpp"

#include "confcoord/errors.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>

namespace confcoord::tensorcalc {

namespace {

struct Node {
    enum Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Func } kind;
    double number = 0.0;
    int var = 0;
    std::string func;
    std::shared_ptr<Node> lhs, rhs;
};

using NodePtr = std::shared_ptr<Node>;

class Parser {
public:
    Parser(const std::string& text, int dim) : s_(text), dim_(dim) {}

    NodePtr parse()
    {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw ConfigError("expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + why);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }

    NodePtr expr()
    {
        NodePtr n = term();
        for (;;) {
            if (accept('+'))
                n = binary(Node::Add, n, term());
            else if (accept('-'))
                n = binary(Node::Sub, n, term());
            else
                return n;
        }
    }

    NodePtr term()
    {
        NodePtr n = unary();
        for (;;) {
            if (accept('*'))
                n = binary(Node::Mul, n, unary());
            else if (accept('/'))
                n = binary(Node::Div, n, unary());
            else
                return n;
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Neg;
            n->lhs = unary();
            return n;
        }
        if (accept('+'))
            return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^'))
            return binary(Node::Pow, base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        char c = s_[pos_];
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')'))
                fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            auto n = std::make_shared<Node>();
            n->kind = Node::Number;
            n->number = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string word = s_.substr(start, pos_ - start);
            auto n = std::make_shared<Node>();
            if (word == "pi" || word == "e") {
                n->kind = Node::Number;
                n->number = word == "pi" ? std::numbers::pi : std::numbers::e;
                return n;
            }
            if (word.size() == 2 && word[0] == 'x' && word[1] >= '1' && word[1] <= '4') {
                int v = word[1] - '1';
                if (v >= dim_)
                    fail("variable " + word + " exceeds dimension " + std::to_string(dim_));
                n->kind = Node::Variable;
                n->var = v;
                return n;
            }
            if (word == "exp" || word == "log" || word == "sin" || word == "cos" || word == "sqrt") {
                if (!accept('('))
                    fail("expected '(' after " + word);
                n->kind = Node::Func;
                n->func = word;
                n->lhs = expr();
                if (!accept(')'))
                    fail("missing ')'");
                return n;
            }
            fail("unknown name '" + word + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
    int dim_;
};

Jet eval(const Node& n, std::span<const Jet> x)
{
    switch (n.kind) {
    case Node::Number:
        return x[0].constant_like(n.number);
    case Node::Variable:
        return x[n.var];
    case Node::Add:
        return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Node::Sub:
        return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Node::Mul:
        return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Node::Div:
        return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Node::Neg:
        return -eval(*n.lhs, x);
    case Node::Pow:
        if (n.rhs->kind == Node::Number)
            return pow(eval(*n.lhs, x), n.rhs->number);
        if (n.rhs->kind == Node::Neg && n.rhs->lhs->kind == Node::Number)
            return pow(eval(*n.lhs, x), -n.rhs->lhs->number);
        return exp(eval(*n.rhs, x) * log(eval(*n.lhs, x)));
    case Node::Func: {
        Jet a = eval(*n.lhs, x);
        if (n.func == "exp")
            return exp(a);
        if (n.func == "log")
            return log(a);
        if (n.func == "sin")
            return sin(a);
        if (n.func == "cos")
            return cos(a);
        return sqrt(a);
    }
    }
    throw ArgumentError("corrupt expression tree");
}

} // namespace

ScalarFn parse_scalar_expression(const std::string& text, int dim)
{
    NodePtr root = Parser(text, dim).parse();
    return [root](std::span<const Jet> x) { return eval(*root, x); };
}

} // namespace confcoord::tensorcalc
