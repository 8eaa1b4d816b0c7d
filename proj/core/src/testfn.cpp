#include "slorb/testfn.hpp"

#include <sstream>

namespace slorb {

namespace {

bool is_integral(const Mat2& m) {
  for (const FieldElem* e : {&m.a, &m.b, &m.c, &m.d})
    if (!e->is_zero() && e->val < 0) return false;
  return true;
}

}  // namespace

bool coset_member(const Field& F, const Mat2& g, const Mat2& x, int n) {
  // x in g K_n  <=>  g^{-1} x == I mod pi^n (the determinant condition is
  // implied at level n for our det-matched inputs)
  Mat2 h = mat_mul(F, mat_inv(F, g), x);
  return mat_congruent(F, h, mat_identity(F), n);
}

Rational evaluate(const Field& F, const TestFunction& f, const Mat2& x) {
  if (f.maximal_indicator)
    return is_integral(x) ? f.maximal_coeff : Rational(0);
  Rational out = 0;
  for (const auto& [c, g] : f.terms)
    if (coset_member(F, g, x, f.level)) out += c;
  return out;
}

TestFunction indicator_congruence(const Field& F, int n, Ambient ambient) {
  if (n < 1) throw value_error("test function level must be >= 1");
  TestFunction f;
  f.level = n;
  f.ambient = ambient;
  f.terms.emplace_back(Rational(1), mat_identity(F));
  f.name = "1_K" + std::to_string(n);
  return f;
}

TestFunction indicator_maximal(const Field& F, Ambient ambient) {
  TestFunction f;
  f.level = 1;
  f.ambient = ambient;
  f.maximal_indicator = true;
  f.name = ambient == Ambient::GL2 ? "1_GL2O" : "1_SL2O";
  return f;
}

TestFunction double_coset_indicator(const Field& F, int n, Ambient ambient, const Mat2& g) {
  if (!is_integral(g)) throw value_error("double coset rep must be integral");
  TestFunction f;
  f.level = n;
  f.ambient = ambient;
  f.name = "1_K" + std::to_string(n) + "gK" + std::to_string(n);
  // left cosets k g K_n for k in K_n; k mod K_{n+1} suffices since
  // g K_{n+1} g^{-1} is contained in K_n for integral unit-determinant g
  std::vector<Mat2> reps{g};
  // k = I + pi^n X over digit matrices X (det condition to first order is
  // trace X = 0 for SL2; GL2 allows all X)
  std::vector<Mat2> kreps;
  for (int xa = 0; xa < F.q(); ++xa)
    for (int xb = 0; xb < F.q(); ++xb)
      for (int xc = 0; xc < F.q(); ++xc) {
        // xd chosen to keep det = 1 mod pi^{n+1} in the SL2 ambient
        std::vector<int> xds;
        if (ambient == Ambient::SL2) {
          xds.push_back(F.residue().neg(xa));
        } else {
          for (int xd = 0; xd < F.q(); ++xd) xds.push_back(xd);
        }
        for (int xd : xds) {
          auto digit = [&](int c) {
            return c == 0 ? fe_zero()
                          : fe_make(F, n, {static_cast<uint8_t>(c)}, true);
          };
          Mat2 k{fe_add(F, fe_one(F), digit(xa)), digit(xb), digit(xc),
                 fe_add(F, fe_one(F), digit(xd))};
          kreps.push_back(k);
        }
      }
  for (const Mat2& k : kreps) {
    Mat2 cand = mat_mul(F, k, g);
    bool known = false;
    for (const Mat2& r : reps)
      if (coset_member(F, r, cand, n)) {
        known = true;
        break;
      }
    if (!known) reps.push_back(cand);
  }
  for (const Mat2& r : reps) f.terms.emplace_back(Rational(1), r);
  return f;
}

TestFunction extend_to_gl2(const TestFunction& f) {
  TestFunction g = f;
  g.ambient = Ambient::GL2;
  g.name = f.name + "~";
  return g;
}

TestFunction tf_add(const Field& F, const TestFunction& f, const TestFunction& g) {
  if (f.level != g.level || f.ambient != g.ambient)
    throw value_error("test function level/ambient mismatch in sum");
  if (f.maximal_indicator || g.maximal_indicator)
    throw value_error("sums with the maximal indicator are not supported");
  TestFunction out = f;
  out.name = f.name + "+" + g.name;
  for (const auto& [c, rep] : g.terms) {
    bool merged = false;
    for (auto& [c0, rep0] : out.terms)
      if (coset_member(F, rep0, rep, f.level)) {
        c0 += c;
        merged = true;
        break;
      }
    if (!merged) out.terms.emplace_back(c, rep);
  }
  // drop vanished cosets
  std::vector<std::pair<Rational, Mat2>> kept;
  for (auto& t : out.terms)
    if (t.first != 0) kept.push_back(t);
  out.terms = std::move(kept);
  return out;
}

TestFunction tf_scale(const Rational& c, const TestFunction& f) {
  TestFunction out = f;
  if (out.maximal_indicator) {
    out.maximal_coeff *= c;
  } else {
    for (auto& t : out.terms) t.first *= c;
  }
  return out;
}

std::string tf_serialize(const TestFunction& f) {
  std::ostringstream os;
  os << "level=" << f.level << "; ambient=" << (f.ambient == Ambient::GL2 ? "GL2" : "SL2")
     << "\n";
  if (f.maximal_indicator) {
    os << f.maximal_coeff << "; maximal\n";
    return os.str();
  }
  for (const auto& [c, g] : f.terms) os << c << "; " << mat_str(g) << "\n";
  return os.str();
}

TestFunction tf_parse(const Field& F, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw value_error("empty test function file");
  TestFunction f;
  {
    size_t lv = line.find("level=");
    size_t am = line.find("ambient=");
    if (lv == std::string::npos || am == std::string::npos)
      throw value_error("bad test function header: " + line);
    f.level = std::stoi(line.substr(lv + 6));
    std::string amb = line.substr(am + 8);
    while (!amb.empty() && (amb.back() == '\r' || amb.back() == ' ')) amb.pop_back();
    if (amb == "SL2")
      f.ambient = Ambient::SL2;
    else if (amb == "GL2")
      f.ambient = Ambient::GL2;
    else
      throw value_error("bad ambient: " + amb);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    size_t semi = line.find(';');
    if (semi == std::string::npos) throw value_error("bad test function line: " + line);
    Rational c(line.substr(0, semi));
    std::string rest = line.substr(semi + 1);
    size_t start = rest.find_first_not_of(' ');
    rest = start == std::string::npos ? "" : rest.substr(start);
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.pop_back();
    if (rest == "maximal") {
      f.maximal_indicator = true;
      f.maximal_coeff = c;
      continue;
    }
    f.terms.emplace_back(c, mat_parse(F, rest));
  }
  return f;
}

}  // namespace slorb
