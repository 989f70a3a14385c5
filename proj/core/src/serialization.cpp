#include "k3e/serialization.hpp"

#include <sstream>

#include "k3e/errors.hpp"

namespace k3e {

Json complex_to_json(const Complex& z) { return Json::array({std::real(z), std::imag(z)}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError("expected a complex number as [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json form_to_json(const BinaryForm& f) {
  Json coeffs = Json::array();
  // file order is ascending s-degree, i.e. the reverse of the internal
  // ascending-t layout
  for (int k = f.degree(); k >= 0; --k) coeffs.push_back(complex_to_json(f.coeff(k)));
  return Json{{"degree", f.degree()}, {"coeffs", coeffs}};
}

BinaryForm form_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("coeffs"))
    throw ValidationError("form: expected {degree, coeffs}");
  if (!j["degree"].is_number_integer()) throw ValidationError("form: degree must be an integer");
  const int degree = j["degree"].get<int>();
  if (degree < 0) throw ValidationError("form: negative degree");
  const Json& coeffs = j["coeffs"];
  if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(degree) + 1)
    throw ValidationError("form: coeffs must list degree + 1 entries");
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
  for (int pos = 0; pos <= degree; ++pos)
    c[static_cast<std::size_t>(degree - pos)] = complex_from_json(coeffs[static_cast<std::size_t>(pos)]);
  return BinaryForm(degree, std::move(c));
}

Json fibration_to_json(const WeierstrassFibration& x) {
  return Json{{"g2", form_to_json(x.g2())}, {"g3", form_to_json(x.g3())}};
}

WeierstrassFibration fibration_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("g2") || !j.contains("g3"))
    throw ValidationError("fibration: expected {g2, g3}");
  return WeierstrassFibration(form_from_json(j["g2"]), form_from_json(j["g3"]));
}

Json lattice_to_json(const IntegralLattice& lat) {
  Json gram = Json::array();
  for (const long long v : lat.gram()) gram.push_back(v);
  return Json{{"rank", lat.rank()}, {"gram", gram}};
}

IntegralLattice lattice_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rank") || !j.contains("gram"))
    throw ValidationError("lattice: expected {rank, gram}");
  const int rank = j["rank"].get<int>();
  const Json& gram = j["gram"];
  if (!gram.is_array()) throw ValidationError("lattice: gram must be an array");
  std::vector<long long> g;
  g.reserve(gram.size());
  for (const Json& v : gram) {
    if (!v.is_number_integer()) throw ValidationError("lattice: gram entries must be integers");
    g.push_back(v.get<long long>());
  }
  return IntegralLattice(rank, std::move(g));
}

Json period_point_to_json(const PeriodPoint& p) {
  Json omega = Json::array();
  for (const Complex& c : p.coords()) omega.push_back(complex_to_json(c));
  return Json{{"omega", omega}};
}

PeriodPoint period_point_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("omega"))
    throw ValidationError("period point: expected {omega}");
  const Json& omega = j["omega"];
  if (!omega.is_array() || omega.size() != 22)
    throw ValidationError("period point: omega must list 22 coordinates");
  std::vector<Complex> c;
  c.reserve(22);
  for (const Json& v : omega) c.push_back(complex_from_json(v));
  return PeriodPoint(std::move(c));
}

Json p1_point_to_json(const P1Point& p) {
  return Json{{"s", complex_to_json(p.s())}, {"t", complex_to_json(p.t())}};
}

P1Point p1_point_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("s") || !j.contains("t"))
    throw ValidationError("P1 point: expected {s, t}");
  return P1Point(complex_from_json(j["s"]), complex_from_json(j["t"]));
}

Json certificate_to_json(const VanishingCertificate& c) {
  Json schedule = Json::array();
  for (const auto& [r, bound] : c.schedule)
    schedule.push_back(Json{{"R", r}, {"bound", bound}});
  Json zeta = Json::array();
  for (const Tangent& v : c.zeta) {
    Json row = Json::array();
    for (const Complex& x : v) row.push_back(complex_to_json(x));
    zeta.push_back(row);
  }
  return Json{{"target", c.target},
              {"point", Json{{"z0", complex_to_json(c.z0)},
                             {"t_coord", complex_to_json(c.t_coord)},
                             {"chart", c.chart == Chart::s_one ? "s=1" : "t=1"}}},
              {"zeta", zeta},
              {"schedule", schedule},
              {"slope", c.decay_exponent}};
}

std::string certificate_to_csv(const VanishingCertificate& c) {
  std::ostringstream out;
  out.precision(17);
  out << "R,bound\n";
  for (const auto& [r, bound] : c.schedule) out << r << "," << bound << "\n";
  return out.str();
}

}  // namespace k3e
