#include "eucalc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace eucalc {

// ---------------------------------------------------------------------------
// VariableContext

struct VariableContext::Data {
    std::vector<std::string> names;
    std::size_t base_arity = 0;
    bool split = false;
};

VariableContext::VariableContext() : data_(std::make_shared<Data>()) {}

VariableContext::VariableContext(std::vector<std::string> names) {
    if (names.size() > kMaxVariables) {
        throw Error("at most " + std::to_string(kMaxVariables) + " variables are supported");
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw Error("empty variable name");
        if (!seen.insert(n).second) throw Error("duplicate variable name '" + n + "'");
    }
    auto d = std::make_shared<Data>();
    d->base_arity = names.size();
    d->names = std::move(names);
    data_ = std::move(d);
}

VariableContext VariableContext::cotangent(const std::vector<std::string>& base_names) {
    std::vector<std::string> names = base_names;
    for (std::size_t i = 0; i < base_names.size(); ++i) names.push_back("w" + std::to_string(i));
    VariableContext ctx(std::move(names));
    auto d = std::make_shared<Data>(*ctx.data_);
    d->base_arity = base_names.size();
    d->split = true;
    return VariableContext(std::shared_ptr<const Data>(std::move(d)));
}

std::size_t VariableContext::arity() const noexcept { return data_->names.size(); }
const std::string& VariableContext::name(std::size_t i) const { return data_->names.at(i); }
const std::vector<std::string>& VariableContext::names() const noexcept { return data_->names; }

std::optional<std::size_t> VariableContext::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < data_->names.size(); ++i) {
        if (data_->names[i] == name) return i;
    }
    return std::nullopt;
}

bool VariableContext::has_cotangent_split() const noexcept { return data_->split; }
std::size_t VariableContext::base_arity() const noexcept { return data_->base_arity; }

std::size_t VariableContext::cotangent_index(std::size_t base_index) const {
    if (!data_->split || base_index >= data_->base_arity) throw Error("context has no cotangent partner for that index");
    return data_->base_arity + base_index;
}

VariableContext VariableContext::base_context() const {
    if (!data_->split) return *this;
    return VariableContext(std::vector<std::string>(data_->names.begin(), data_->names.begin() + data_->base_arity));
}

bool VariableContext::operator==(const VariableContext& other) const noexcept {
    if (data_ == other.data_) return true;
    return data_->names == other.data_->names && data_->split == other.data_->split &&
           data_->base_arity == other.data_->base_arity;
}

// ---------------------------------------------------------------------------
// Monomial

unsigned Monomial::total_degree(std::size_t arity) const noexcept {
    unsigned d = 0;
    for (std::size_t i = 0; i < arity; ++i) d += exp[i];
    return d;
}

bool Monomial::divides(const Monomial& other, std::size_t arity) const noexcept {
    for (std::size_t i = 0; i < arity; ++i) {
        if (exp[i] > other.exp[i]) return false;
    }
    return true;
}

Monomial Monomial::operator*(const Monomial& other) const noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.exp[i] = static_cast<std::uint16_t>(exp[i] + other.exp[i]);
    return r;
}

Monomial Monomial::operator/(const Monomial& other) const noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.exp[i] = static_cast<std::uint16_t>(exp[i] - other.exp[i]);
    return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b, std::size_t arity) noexcept {
    Monomial r;
    for (std::size_t i = 0; i < arity; ++i) r.exp[i] = std::max(a.exp[i], b.exp[i]);
    return r;
}

bool Monomial::coprime(const Monomial& other, std::size_t arity) const noexcept {
    for (std::size_t i = 0; i < arity; ++i) {
        if (exp[i] != 0 && other.exp[i] != 0) return false;
    }
    return true;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto e : m.exp) {
        h ^= e;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// MonomialOrder

MonomialOrder MonomialOrder::block_elimination(std::size_t front) {
    if (front > kMaxVariables) throw Error("elimination block larger than the variable limit");
    std::uint32_t mask = front == 32 ? ~0u : ((1u << front) - 1u);
    return MonomialOrder(Kind::Elimination, mask);
}

namespace {

int grevlex_masked(const Monomial& a, const Monomial& b, std::size_t arity, std::uint32_t mask) {
    unsigned da = 0, db = 0;
    for (std::size_t i = 0; i < arity; ++i) {
        if (mask >> i & 1u) {
            da += a.exp[i];
            db += b.exp[i];
        }
    }
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = arity; i-- > 0;) {
        if (!(mask >> i & 1u)) continue;
        if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i] ? -1 : 1;
    }
    return 0;
}

}  // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b, std::size_t arity) const noexcept {
    switch (kind_) {
        case Kind::Lex:
            for (std::size_t i = 0; i < arity; ++i) {
                if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? -1 : 1;
            }
            return 0;
        case Kind::GrevLex:
            return grevlex_masked(a, b, arity, ~0u);
        case Kind::Elimination: {
            if (int c = grevlex_masked(a, b, arity, mask_); c != 0) return c;
            return grevlex_masked(a, b, arity, ~mask_);
        }
    }
    return 0;
}

std::string MonomialOrder::describe() const {
    switch (kind_) {
        case Kind::Lex: return "lex";
        case Kind::GrevLex: return "grevlex";
        case Kind::Elimination: return "elim:" + std::to_string(mask_);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Polynomial

namespace {

const MonomialOrder& canonical_order() {
    static const MonomialOrder order = MonomialOrder::grevlex();
    return order;
}

std::vector<Term> merge_add(const std::vector<Term>& a, const std::vector<Term>& b, std::size_t n, bool subtract) {
    const auto& ord = canonical_order();
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c;
        if (i == a.size()) c = -1;
        else if (j == b.size()) c = 1;
        else c = ord.compare(a[i].monomial, b[j].monomial, n);
        if (c > 0) {
            out.push_back(a[i++]);
        } else if (c < 0) {
            out.push_back(b[j++]);
            if (subtract) out.back().coeff = -out.back().coeff;
        } else {
            BigRational s = subtract ? BigRational(a[i].coeff - b[j].coeff) : BigRational(a[i].coeff + b[j].coeff);
            if (s != 0) out.push_back(Term{a[i].monomial, s});
            ++i;
            ++j;
        }
    }
    return out;
}

void require_same_context(const Polynomial& a, const Polynomial& b) {
    if (!(a.context() == b.context())) throw Error("polynomials live in different variable contexts");
}

}  // namespace

Polynomial::Polynomial(VariableContext context, const BigRational& constant) : context_(std::move(context)) {
    if (constant != 0) terms_.push_back(Term{Monomial{}, constant});
}

Polynomial::Polynomial(VariableContext context, std::vector<Term> terms)
    : context_(std::move(context)), terms_(std::move(terms)) {
    normalize();
}

void Polynomial::normalize() {
    const std::size_t n = context_.arity();
    for (auto& t : terms_) {
        for (std::size_t i = n; i < kMaxVariables; ++i) {
            if (t.monomial.exp[i] != 0) throw Error("monomial uses a variable outside its context");
        }
    }
    const auto& ord = canonical_order();
    std::sort(terms_.begin(), terms_.end(),
              [&](const Term& a, const Term& b) { return ord.compare(a.monomial, b.monomial, n) > 0; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().monomial == t.monomial) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(merged);
}

Polynomial Polynomial::variable(const VariableContext& context, std::size_t index) {
    if (index >= context.arity()) throw Error("variable index out of range");
    Monomial m;
    m.exp[index] = 1;
    Polynomial p(context);
    p.terms_.push_back(Term{m, BigRational(1)});
    return p;
}

bool Polynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.total_degree(context_.arity()) == 0);
}

BigRational Polynomial::constant_term() const {
    if (!terms_.empty() && terms_.back().monomial.total_degree(context_.arity()) == 0) return terms_.back().coeff;
    return BigRational(0);
}

unsigned Polynomial::total_degree() const noexcept {
    return terms_.empty() ? 0 : terms_.front().monomial.total_degree(context_.arity());
}

unsigned Polynomial::degree_in(std::size_t var) const noexcept {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.monomial.exp[var]);
    return d;
}

std::uint32_t Polynomial::support() const noexcept {
    std::uint32_t s = 0;
    for (const auto& t : terms_) {
        for (std::size_t i = 0; i < context_.arity(); ++i) {
            if (t.monomial.exp[i] != 0) s |= 1u << i;
        }
    }
    return s;
}

bool Polynomial::is_affine_linear() const noexcept { return total_degree() <= 1; }

const Term& Polynomial::leading_term(const MonomialOrder& order) const {
    if (terms_.empty()) throw Error("leading term of the zero polynomial");
    const std::size_t n = context_.arity();
    const Term* best = &terms_.front();
    for (const auto& t : terms_) {
        if (order.compare(t.monomial, best->monomial, n) > 0) best = &t;
    }
    return *best;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    require_same_context(*this, other);
    Polynomial r(context_);
    r.terms_ = merge_add(terms_, other.terms_, context_.arity(), false);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    require_same_context(*this, other);
    Polynomial r(context_);
    r.terms_ = merge_add(terms_, other.terms_, context_.arity(), true);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    require_same_context(*this, other);
    std::unordered_map<Monomial, BigRational, MonomialHash> acc;
    acc.reserve(terms_.size() * other.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : other.terms_) {
            acc[a.monomial * b.monomial] += a.coeff * b.coeff;
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc) terms.push_back(Term{m, std::move(c)});
    return Polynomial(context_, std::move(terms));
}

Polynomial Polynomial::operator*(const BigRational& scalar) const {
    if (scalar == 0) return Polynomial(context_);
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff *= scalar;
    return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result(context_, BigRational(1));
    Polynomial base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

bool Polynomial::operator==(const Polynomial& other) const {
    if (!(context_ == other.context_) || terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!(terms_[i].monomial == other.terms_[i].monomial) || terms_[i].coeff != other.terms_[i].coeff) return false;
    }
    return true;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        const auto e = t.monomial.exp[var];
        if (e == 0) continue;
        Term d = t;
        d.monomial.exp[var] = static_cast<std::uint16_t>(e - 1);
        d.coeff *= e;
        out.push_back(std::move(d));
    }
    return Polynomial(context_, std::move(out));
}

BigRational Polynomial::evaluate(std::span<const BigRational> point) const {
    const std::size_t n = context_.arity();
    if (point.size() != n) throw Error("evaluation point has the wrong length");
    BigRational sum = 0;
    for (const auto& t : terms_) {
        BigRational v = t.coeff;
        for (std::size_t i = 0; i < n; ++i) {
            if (t.monomial.exp[i] == 0) continue;
            BigRational base = point[i];
            BigRational pw = 1;
            for (unsigned k = 0; k < t.monomial.exp[i]; ++k) pw *= base;
            v *= pw;
        }
        sum += v;
    }
    return sum;
}

Polynomial Polynomial::substitute(std::size_t var, const Polynomial& value) const {
    require_same_context(*this, value);
    std::vector<Polynomial> images;
    images.reserve(context_.arity());
    for (std::size_t i = 0; i < context_.arity(); ++i) {
        images.push_back(i == var ? value : variable(context_, i));
    }
    return compose(images);
}

Polynomial Polynomial::compose(std::span<const Polynomial> images) const {
    const std::size_t n = context_.arity();
    if (images.size() != n) throw Error("compose needs one image per variable");
    if (n == 0) return *this;
    const VariableContext& target = images[0].context();
    // Cache powers of each image.
    std::vector<std::vector<Polynomial>> powers(n);
    Polynomial result(target);
    for (const auto& t : terms_) {
        Polynomial term(target, t.coeff);
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned e = t.monomial.exp[i];
            if (e == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(Polynomial(target, BigRational(1)));
            while (pw.size() <= e) pw.push_back(pw.back() * images[i]);
            term = term * pw[e];
        }
        result += term;
    }
    return result;
}

Polynomial Polynomial::embed(const VariableContext& target, std::span<const std::size_t> index_map) const {
    const std::size_t n = context_.arity();
    if (index_map.size() != n) throw Error("embed needs one index per variable");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term u{Monomial{}, t.coeff};
        for (std::size_t i = 0; i < n; ++i) {
            if (t.monomial.exp[i] == 0) continue;
            if (index_map[i] >= target.arity()) throw Error("embedding drops a variable that is in use");
            u.monomial.exp[index_map[i]] = t.monomial.exp[i];
        }
        out.push_back(std::move(u));
    }
    return Polynomial(target, std::move(out));
}

Polynomial Polynomial::rename_into(const VariableContext& target) const {
    std::vector<std::size_t> map(context_.arity(), kMaxVariables);
    for (std::size_t i = 0; i < context_.arity(); ++i) {
        if (auto j = target.index_of(context_.name(i))) map[i] = *j;
    }
    return embed(target, map);
}

Polynomial Polynomial::translate(std::span<const BigRational> shift) const {
    const std::size_t n = context_.arity();
    if (shift.size() != n) throw Error("translation vector has the wrong length");
    std::vector<Polynomial> images;
    images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) images.push_back(variable(context_, i) + Polynomial(context_, shift[i]));
    return compose(images);
}

Polynomial Polynomial::monic(const MonomialOrder& order) const {
    if (terms_.empty()) return *this;
    BigRational lc = leading_term(order).coeff;
    return *this * BigRational(1 / lc);
}

Polynomial Polynomial::primitive() const {
    if (terms_.empty()) return *this;
    BigInt den_lcm = 1;
    for (const auto& t : terms_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
    BigInt num_gcd = 0;
    for (const auto& t : terms_) {
        BigInt v = t.coeff.get_num() * (den_lcm / t.coeff.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_mpz_t());
    }
    BigRational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (terms_.front().coeff < 0) scale = -scale;
    return *this * scale;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    const std::size_t n = context_.arity();
    bool first = true;
    for (const auto& t : terms_) {
        BigRational c = t.coeff;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        const bool constant = t.monomial.total_degree(n) == 0;
        bool need_star = false;
        if (constant || c != 1) {
            os << c.get_str();
            need_star = true;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto e = t.monomial.exp[i];
            if (e == 0) continue;
            if (need_star) os << "*";
            os << context_.name(i);
            if (e > 1) os << "^" << e;
            need_star = true;
        }
    }
    return os.str();
}

std::optional<Polynomial> divide_exact(const Polynomial& dividend, const Polynomial& divisor) {
    if (divisor.is_zero()) throw Error("division by the zero polynomial");
    const auto& ord = MonomialOrder::lex();
    const std::size_t n = dividend.context().arity();
    const Term lt = divisor.leading_term(ord);
    Polynomial rem = dividend;
    std::vector<Term> quotient;
    while (!rem.is_zero()) {
        const Term& r = rem.leading_term(ord);
        if (!lt.monomial.divides(r.monomial, n)) return std::nullopt;
        Term q{r.monomial / lt.monomial, r.coeff / lt.coeff};
        quotient.push_back(q);
        rem = rem - divisor * Polynomial(dividend.context(), std::vector<Term>{q});
    }
    return Polynomial(dividend.context(), std::move(quotient));
}

std::vector<Term> sorted_terms(const Polynomial& p, const MonomialOrder& order) {
    std::vector<Term> terms = p.terms();
    const std::size_t n = p.context().arity();
    if (order.kind() != MonomialOrder::Kind::GrevLex) {
        std::sort(terms.begin(), terms.end(),
                  [&](const Term& a, const Term& b) { return order.compare(a.monomial, b.monomial, n) > 0; });
    }
    return terms;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PolyParser {
public:
    PolyParser(const VariableContext& ctx, std::string_view text) : ctx_(ctx), text_(text) {}

    Polynomial parse() {
        skip_ws();
        if (pos_ == text_.size()) fail("empty polynomial");
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) unexpected();
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg + " in '" + std::string(text_) + "'", pos_ + 1); }

    [[noreturn]] void unexpected() const {
        std::size_t end = pos_;
        if (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_') {
            while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) ++end;
        } else {
            end = pos_ + 1;
        }
        const std::string token(text_.substr(pos_, end - pos_));
        const bool operand = std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(' || text_[pos_] == '_';
        fail(operand ? "implicit multiplication is not allowed before token '" + token + "'"
                     : "unexpected token '" + token + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        Polynomial acc = term();
        while (true) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (accept('*')) acc *= factor();
        return acc;
    }

    Polynomial factor() {
        skip_ws();
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        Polynomial base = primary();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected a non-negative integer exponent");
            const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
            if (e > 4096) fail("exponent too large");
            base = base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    std::string digits() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial primary() {
        skip_ws();
        if (pos_ == text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            BigInt num(digits(), 10);
            BigInt den = 1;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                skip_ws();
                if (pos_ == text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    fail("'/' is only allowed between integer literals");
                }
                den = BigInt(digits(), 10);
                if (den == 0) fail("zero denominator");
            }
            BigRational q(num, den);
            q.canonicalize();
            return Polynomial(ctx_, q);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            auto idx = ctx_.index_of(name);
            if (!idx) {
                pos_ = start;
                fail("unknown variable '" + name + "'");
            }
            return Polynomial::variable(ctx_, *idx);
        }
        unexpected();
    }

    const VariableContext& ctx_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const VariableContext& context, std::string_view text) {
    return PolyParser(context, text).parse();
}

}  // namespace eucalc
