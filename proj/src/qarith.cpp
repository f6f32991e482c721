#include "qmehler/qarith.hpp"

#include <cctype>
#include <cstdlib>

namespace qmehler {

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

ExactScalar rational_from_string(std::string_view text) {
  std::string s(text);
  // strip surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw DomainError("empty rational literal");

  if (auto pos = s.find('/'); pos != std::string::npos) {
    std::string num = s.substr(0, pos), den = s.substr(pos + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw DomainError("bad rational literal '" + s + "' (expected p/q)");
    ExactInt d(den);
    if (d == 0) throw DomainError("zero denominator in '" + s + "'");
    return ExactScalar(ExactInt(num), d);
  }
  if (auto pos = s.find('.'); pos != std::string::npos) {
    std::string head = s.substr(0, pos), frac = s.substr(pos + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '+' || head[0] == '-')) head.erase(head.begin());
    if (head.empty()) head = "0";
    if (!is_integer_token(head) || (!frac.empty() && !is_integer_token(frac)))
      throw DomainError("bad decimal literal '" + s + "'");
    ExactInt ip(head);
    ExactInt fp = frac.empty() ? ExactInt(0) : ExactInt(frac);
    ExactInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    ExactScalar r = ExactScalar(ip) + ExactScalar(fp, scale);
    return neg ? -r : r;
  }
  if (!is_integer_token(s)) throw DomainError("bad rational literal '" + s + "'");
  return ExactScalar(ExactInt(s));
}

std::string rational_to_string(const ExactScalar& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

TruncatedValue q_pochhammer_inf_full(double a, double q, const TruncationPolicy& policy) {
  TruncatedValue lg = log_q_pochhammer_inf(a, q, policy);
  TruncatedValue out;
  out.value = std::exp(lg.value);
  out.tail_bound = out.value * std::expm1(lg.tail_bound);
  out.terms = lg.terms;
  return out;
}

TruncatedValue log_q_pochhammer_inf(double a, double q, const TruncationPolicy& policy) {
  policy.validate();
  if (!(std::fabs(q) < 1.0)) throw DomainError("q_pochhammer_inf requires |q| < 1");
  if (!(std::fabs(a) < 1.0)) throw DomainError("q_pochhammer_inf requires |a| < 1");
  TruncatedValue out;
  if (a == 0.0) return out;  // every factor is 1
  const double denom = (1.0 - std::fabs(q)) * (1.0 - std::fabs(a));
  double aq = a;  // a q^j
  double acc = 0.0;
  for (long j = 0; j < policy.max_terms; ++j) {
    acc += std::log1p(-aq);
    aq *= q;
    ++out.terms;
    double tail = std::fabs(aq) / denom;  // |a||q|^{j+1} / ((1-|q|)(1-|a|))
    if (tail < policy.tol) {
      out.value = acc;
      out.tail_bound = tail;
      return out;
    }
  }
  out.value = acc;
  out.tail_bound = std::fabs(aq) / denom;
  return out;
}

}  // namespace qmehler
