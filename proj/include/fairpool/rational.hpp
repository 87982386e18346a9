#pragma once

#include <gmpxx.h>

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace fairpool {

// Exact rational with canonical form guaranteed after every operation.
// Thin value wrapper over GMP's mpq_class; exists so that construction always
// canonicalizes and so that arithmetic yields a plain value type (GMP's own
// operators return expression templates, which misbehave under `auto`).
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(int n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rat(const mpz_class& z) : v_(z) {}

    // Accepts "7", "-7", "7/3"; no whitespace, no signs inside the denominator.
    static std::optional<Rat> parse(std::string_view s);

    std::string str() const;                 // "num/den", or "num" when den == 1
    std::string decimal_str(int significant_digits = 12) const;
    double to_double() const { return v_.get_d(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_negative() const { return sgn(v_) < 0; }
    bool is_positive() const { return sgn(v_) > 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    long to_long() const { return mpz_get_si(v_.get_num().get_mpz_t()); }

    Rat abs() const { return Rat(mpq_class(::abs(v_))); }

    // Nonnegative integer exponent; round lengths keep this tiny.
    Rat pow(unsigned e) const {
        Rat out(1);
        Rat base = *this;
        while (e) {
            if (e & 1) out = out * base;
            base = base * base;
            e >>= 1;
        }
        return out;
    }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (sgn(b.v_) == 0) throw std::domain_error("rational division by zero");
        return Rat(mpq_class(a.v_ / b.v_));
    }
    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    mpq_class v_;
};

inline std::optional<Rat> Rat::parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    auto digits = [](std::string_view t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string_view num = s, den;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
        if (!digits(den)) return std::nullopt;
    }
    if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
        if (!digits(num.substr(1))) return std::nullopt;
    } else if (!digits(num)) {
        return std::nullopt;
    }
    std::string text(s);
    if (text[0] == '+') text.erase(0, 1);  // GMP's set_str rejects a leading '+'
    mpq_class q;
    if (q.set_str(text, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return Rat(q);
}

inline std::string Rat::str() const {
    return v_.get_str();
}

inline std::string Rat::decimal_str(int significant_digits) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, to_double());
    return buf;
}

}  // namespace fairpool
