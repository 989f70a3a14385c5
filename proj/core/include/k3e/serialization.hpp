#pragma once

#include <json.hpp>
#include <string>

#include "k3e/binary_form.hpp"
#include "k3e/eisenman.hpp"
#include "k3e/fibration.hpp"
#include "k3e/lattice.hpp"

namespace k3e {

using Json = nlohmann::json;

// Binary forms serialize as {"degree": d, "coeffs": [[re, im], ...]} with the
// coefficients listed lowest s-degree first: coeffs[j] multiplies s^j t^(d-j).
Json form_to_json(const BinaryForm& f);
BinaryForm form_from_json(const Json& j);

// Fibration files: {"g2": <form of degree 8>, "g3": <form of degree 12>}.
Json fibration_to_json(const WeierstrassFibration& x);
WeierstrassFibration fibration_from_json(const Json& j);

// {"rank": r, "gram": [row-major integers]}
Json lattice_to_json(const IntegralLattice& lat);
IntegralLattice lattice_from_json(const Json& j);

// {"omega": [[re, im] x 22]}
Json period_point_to_json(const PeriodPoint& p);
PeriodPoint period_point_from_json(const Json& j);

Json p1_point_to_json(const P1Point& p);
P1Point p1_point_from_json(const Json& j);

Json certificate_to_json(const VanishingCertificate& c);
std::string certificate_to_csv(const VanishingCertificate& c);

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

}  // namespace k3e
