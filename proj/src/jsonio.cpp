#include "toric/jsonio.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "toric/errors.hpp"

namespace toric::jsonio {

using nlohmann::json;

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw ParseError(what);
}

double finite_or_string(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw ParseError("unexpected string where a number was required");
    }
    return v.get<double>();
}

json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    return "inf";
}

}  // namespace

SystemFile parse_system(const json& j) {
    require(j.is_object(), "system file must be a JSON object");
    require(j.value("version", "") == "1", "unsupported system file version");
    require(j.contains("n") && j.contains("supports"), "missing n or supports");
    int n = j.at("n").get<int>();
    std::vector<std::vector<VecZ>> pts;
    for (const auto& eq : j.at("supports")) {
        std::vector<VecZ> support;
        for (const auto& point : eq) {
            VecZ a;
            for (const auto& coord : point) a.push_back(coord.get<std::int64_t>());
            support.push_back(std::move(a));
        }
        pts.push_back(std::move(support));
    }
    std::vector<std::vector<double>> weights;
    if (j.contains("weights") && !j.at("weights").is_null())
        for (const auto& eq : j.at("weights"))
            weights.push_back(eq.get<std::vector<double>>());

    SystemFile file;
    file.supports = make_supports(n, std::move(pts), std::move(weights));
    if (j.contains("coefficients") && !j.at("coefficients").is_null()) {
        std::vector<Eigen::VectorXcd> coeffs;
        int i = 0;
        for (const auto& eq : j.at("coefficients")) {
            Eigen::VectorXcd row(file.supports->Si[i]);
            require(static_cast<int>(eq.size()) == file.supports->Si[i],
                    "coefficient row length mismatch");
            int a = 0;
            for (const auto& c : eq) {
                require(c.contains("re") && c.contains("im"),
                        "coefficients must be {re, im} objects");
                row(a++) = std::complex<double>(c.at("re").get<double>(),
                                                c.at("im").get<double>());
            }
            coeffs.push_back(std::move(row));
            ++i;
        }
        file.system = expsum::ExpSumSystem::create(file.supports, std::move(coeffs));
    }
    if (j.contains("labels") && !j.at("labels").is_null())
        file.labels = j.at("labels").get<std::vector<std::string>>();
    return file;
}

SystemFile load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_system(j);
}

json system_to_json(const expsum::ExpSumSystem& system,
                    const std::vector<std::string>& labels) {
    const SupportTuple& sup = *system.supports;
    json j;
    j["version"] = "1";
    j["n"] = sup.n;
    json supports = json::array();
    for (int i = 0; i < sup.n; ++i) {
        json eq = json::array();
        for (const auto& a : sup.points[i]) eq.push_back(a);
        supports.push_back(eq);
    }
    j["supports"] = supports;
    bool unit_weights = true;
    for (const auto& r : sup.rho)
        for (double w : r)
            if (w != 1.0) unit_weights = false;
    if (!unit_weights) j["weights"] = sup.rho;
    json coeffs = json::array();
    for (int i = 0; i < sup.n; ++i) {
        json eq = json::array();
        double scale = std::exp(system.log_scale(i));
        for (int a = 0; a < sup.Si[i]; ++a)
            eq.push_back({{"re", system.coeffs[i](a).real() * scale},
                          {"im", system.coeffs[i](a).imag() * scale}});
        coeffs.push_back(eq);
    }
    j["coefficients"] = coeffs;
    if (!labels.empty()) j["labels"] = labels;
    return j;
}

std::string system_hash(const expsum::ExpSumSystem& system) {
    // FNV-1a over a canonical byte serialization.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    const SupportTuple& sup = *system.supports;
    mix(&sup.n, sizeof(sup.n));
    for (int i = 0; i < sup.n; ++i) {
        for (const auto& a : sup.points[i])
            for (auto v : a) mix(&v, sizeof(v));
        for (double w : sup.rho[i]) mix(&w, sizeof(w));
        double scale = std::exp(system.log_scale(i));
        for (int a = 0; a < sup.Si[i]; ++a) {
            double re = system.coeffs[i](a).real() * scale;
            double im = system.coeffs[i](a).imag() * scale;
            mix(&re, sizeof(re));
            mix(&im, sizeof(im));
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json certificate_to_json(const newton::Certificate& cert) {
    return {{"beta", number_or_string(cert.beta)}, {"mu", number_or_string(cert.mu)},
            {"nu", cert.nu},                       {"alpha_hat", number_or_string(cert.alpha_hat)},
            {"passed", cert.passed},               {"target_alpha", cert.target_alpha}};
}

newton::Certificate certificate_from_json(const json& j) {
    newton::Certificate cert;
    cert.beta = finite_or_string(j.at("beta"));
    cert.mu = finite_or_string(j.at("mu"));
    cert.nu = j.at("nu").get<double>();
    cert.alpha_hat = finite_or_string(j.at("alpha_hat"));
    cert.passed = j.at("passed").get<bool>();
    cert.target_alpha = j.at("target_alpha").get<double>();
    return cert;
}

json roots_to_json(const expsum::ExpSumSystem& system,
                   const std::vector<lattice::TorusPoint>& roots,
                   const std::vector<newton::Certificate>& certs) {
    json j;
    j["version"] = "1";
    j["system_hash"] = system_hash(system);
    json list = json::array();
    for (size_t r = 0; r < roots.size(); ++r) {
        json entry;
        std::vector<double> re(roots[r].z.size()), im(roots[r].z.size());
        for (int k = 0; k < roots[r].z.size(); ++k) {
            re[static_cast<size_t>(k)] = roots[r].z(k).real();
            im[static_cast<size_t>(k)] = roots[r].z(k).imag();
        }
        entry["re"] = re;
        entry["im"] = im;
        if (r < certs.size()) entry["certificate"] = certificate_to_json(certs[r]);
        list.push_back(entry);
    }
    j["roots"] = list;
    return j;
}

RootsFile parse_roots(const json& j, int n) {
    require(j.value("version", "") == "1", "unsupported roots file version");
    RootsFile file;
    file.system_hash = j.value("system_hash", "");
    for (const auto& entry : j.at("roots")) {
        auto re = entry.at("re").get<std::vector<double>>();
        auto im = entry.at("im").get<std::vector<double>>();
        require(static_cast<int>(re.size()) == n && static_cast<int>(im.size()) == n,
                "root dimension mismatch");
        lattice::TorusPoint p;
        p.z.resize(n);
        for (int k = 0; k < n; ++k)
            p.z(k) = std::complex<double>(re[static_cast<size_t>(k)],
                                          im[static_cast<size_t>(k)]);
        file.roots.push_back(std::move(p));
        if (entry.contains("certificate"))
            file.certificates.push_back(certificate_from_json(entry.at("certificate")));
    }
    return file;
}

RootsFile load_roots(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_roots(j, n);
}

json invariants_to_json(const polytope::InvariantReport& report) {
    json j;
    j["version"] = "1";
    j["nV"] = report.nV.convert_to<std::int64_t>();
    j["detLambda"] = report.detLambda.convert_to<std::int64_t>();
    j["bkk_count"] = report.bkk.convert_to<std::int64_t>();
    j["mixed_area"] = report.mixed_area;
    json per_ray = json::array();
    for (const auto& row : report.eta_per_ray) {
        json eta_vals = json::array();
        for (double v : row.eta_i)
            eta_vals.push_back(std::isfinite(v) ? json(v) : json());
        per_ray.push_back({{"xi", row.ray.xi}, {"eta_i", eta_vals}});
    }
    j["eta_per_ray"] = per_ray;
    if (report.eta_i)
        j["eta_i"] = *report.eta_i;
    else
        j["eta_i"] = nullptr;
    j["eta"] = report.eta ? json(*report.eta) : json();
    j["strongly_mixed"] = report.strongly_mixed;
    j["dr_bound"] = report.dr;
    j["Q"] = report.Q ? json(*report.Q) : json();
    std::vector<double> deltas(report.deltas.data(),
                               report.deltas.data() + report.deltas.size());
    j["deltas"] = deltas;
    j["v"] = report.v;
    j["ray_count"] = report.ray_count;
    return j;
}

}  // namespace toric::jsonio
