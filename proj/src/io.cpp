#include "renorm/io.hpp"

#include <charconv>

#include "json.hpp"

namespace renorm {
namespace io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

json fn_to_json(const AnalyticFn& f) {
  json j;
  j["domain"] = {{"lo", f.domain().lo}, {"hi", f.domain().hi}};
  j["tail_bound"] = f.tail_bound();
  j["resolved"] = f.resolved();
  j["tol_rel"] = f.tol_rel();
  json pieces = json::array();
  for (const auto& p : f.pieces()) {
    json jp;
    jp["lo"] = p.lo;
    jp["hi"] = p.hi;
    jp["warp_side"] = p.side == WarpSide::none
                          ? "none"
                          : (p.side == WarpSide::left ? "left" : "right");
    jp["warp_exponent"] = p.g;
    jp["coeffs"] = p.coef;
    jp["tail"] = p.tail;
    jp["resolved"] = p.resolved;
    pieces.push_back(std::move(jp));
  }
  j["pieces"] = std::move(pieces);
  return j;
}

AnalyticFn fn_from_json(const json& j) {
  DomainInterval dom(j.at("domain").at("lo").get<double>(),
                     j.at("domain").at("hi").get<double>());
  std::vector<Piece> pieces;
  for (const auto& jp : j.at("pieces")) {
    Piece p;
    p.lo = jp.at("lo").get<double>();
    p.hi = jp.at("hi").get<double>();
    std::string side = jp.at("warp_side").get<std::string>();
    p.side = side == "left" ? WarpSide::left
                            : (side == "right" ? WarpSide::right
                                               : WarpSide::none);
    p.g = jp.at("warp_exponent").get<double>();
    p.coef = jp.at("coeffs").get<std::vector<double>>();
    p.tail = jp.at("tail").get<double>();
    p.resolved = jp.at("resolved").get<bool>();
    pieces.push_back(std::move(p));
  }
  return AnalyticFn::from_pieces(dom, std::move(pieces),
                                 j.value("tol_rel", 1e-13));
}

json params_to_json(const RegimeParams& P) {
  json j;
  j["p"] = P.p;
  j["r"] = P.r;
  j["nu"] = P.nu;
  j["b"] = P.b;
  j["lambda1"] = P.lambda1;
  j["regime"] = regime_name(P.regime);
  j["test_mode"] = P.test_mode;
  return j;
}

}  // namespace

std::string bundle_to_json(const SolutionBundle& B, int indent) {
  json j;
  j["params"] = params_to_json(B.params);
  j["lambda"] = B.lambda;
  j["z1"] = B.z1;
  j["tau"] = B.tau;
  j["y0"] = B.y0;
  j["xi_max"] = B.xi_max;
  j["xi_chain"] = B.xi_chain;
  j["residual"] = B.residual;
  j["iterations"] = B.iterations;
  j["b_fixed_point"] = B.b_fixed_point;
  j["a_frame"] = B.a_frame;
  j["zeta"] = B.zeta;
  j["psi"] = fn_to_json(B.psi);
  j["u"] = fn_to_json(B.u);
  j["phi"] = fn_to_json(B.phi);
  j["v"] = fn_to_json(B.v);
  return j.dump(indent) + "\n";
}

SolutionBundle bundle_from_json(const std::string& text) {
  json j = json::parse(text);
  SolutionBundle B;
  const auto& jp = j.at("params");
  B.params = make_params(jp.at("p").get<int>(), jp.at("r").get<double>(),
                         jp.at("nu").get<double>(),
                         jp.value("test_mode", false));
  B.lambda = j.at("lambda").get<double>();
  B.z1 = j.at("z1").get<double>();
  B.tau = j.at("tau").get<double>();
  B.y0 = j.at("y0").get<double>();
  B.xi_max = j.at("xi_max").get<double>();
  B.xi_chain = j.value("xi_chain", std::vector<double>{});
  B.residual = j.at("residual").get<double>();
  B.iterations = j.at("iterations").get<int>();
  B.b_fixed_point = j.value("b_fixed_point", true);
  B.a_frame = j.at("a_frame").get<double>();
  B.zeta = j.at("zeta").get<std::vector<double>>();
  B.psi = fn_from_json(j.at("psi"));
  B.u = fn_from_json(j.at("u"));
  B.phi = fn_from_json(j.at("phi"));
  if (j.contains("v")) B.v = fn_from_json(j.at("v"));
  return B;
}

std::string bounds_report_to_json(const BoundsReport& report,
                                  const std::string& title, int indent) {
  json j;
  j["title"] = title;
  j["all_pass"] = report.all_pass();
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"name", e.name},
                       {"lhs", e.lhs},
                       {"rhs", e.rhs},
                       {"margin", e.margin},
                       {"pass", e.pass}});
  }
  j["entries"] = std::move(entries);
  return j.dump(indent) + "\n";
}

std::string trace_to_json(const IterationTrace& trace, int indent) {
  json j = json::array();
  for (const auto& r : trace.records) {
    j.push_back({{"iter", r.iter},
                 {"lambda", r.lambda},
                 {"sup_change", r.sup_change},
                 {"damping", r.damping},
                 {"truncated", r.truncated}});
  }
  return j.dump(indent) + "\n";
}

}  // namespace io
}  // namespace renorm
