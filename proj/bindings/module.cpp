#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shiftprod/arith.hpp"
#include "shiftprod/bounds.hpp"
#include "shiftprod/certfile.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/oracle.hpp"
#include "shiftprod/powerful.hpp"

namespace py = pybind11;
using namespace shiftprod;

namespace {

py::int_ to_py(const BigInt& z) {
    return py::reinterpret_steal<py::int_>(
        PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& v) {
    auto s = py::reinterpret_steal<py::object>(PyObject_Str(v.ptr()));
    return BigInt(s.cast<std::string>());
}

py::dict report_dict(const BoundReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["params"] = r.params;
    d["exact"] = r.exact;
    d["analytic"] = r.analytic;
    d["applicable"] = r.applicable;
    d["satisfied"] = r.satisfied;
    return d;
}

py::dict verdict_dict(const Verdict& v) {
    py::dict d;
    d["outcome"] = to_string(v.outcome);
    d["witness"] = describe(v.witness);
    d["detail"] = v.detail;
    if (const auto* o = std::get_if<ObstructionWitness>(&v.witness))
        d["obstruction_prime"] = o->p;
    if (const auto* c = std::get_if<ChainWitness>(&v.witness)) {
        d["chain_id"] = c->chain_id;
        d["covered"] = py::make_tuple(c->covered.lo, c->covered.hi);
    }
    if (const auto* b = std::get_if<BundleWitness>(&v.witness))
        d["case"] = b->case_name;
    if (const auto* f = std::get_if<FactorWitness>(&v.witness))
        d["unit_prime"] = to_py(f->unit_prime);
    return d;
}

TupleMode mode_arg(const std::string& s) {
    auto m = tuple_mode_from_string(s);
    if (!m)
        throw DomainError("unknown tuple mode \"" + s + "\"");
    return *m;
}

ChainCert chain_arg(const std::vector<std::vector<std::uint64_t>>& tuples,
                    const std::string& mode) {
    ChainCert chain;
    for (const auto& t : tuples)
        chain.tuples.push_back(TupleCert{t, mode_arg(mode)});
    return chain;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "certificates and sieve checks for shifted-power products";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<IncompleteFactorizationError>(m, "IncompleteFactorization",
                                                         PyExc_RuntimeError);

    // arithmetic
    m.def("mod_pow", [](std::uint64_t b, std::uint64_t e, std::uint64_t mod) {
        return mod_pow(b, e, mod);
    });
    m.def("odd_part", &odd_part);
    m.def("multiplicative_order",
          [](std::uint64_t a, std::uint64_t mod) { return multiplicative_order(a, mod); });
    m.def("exact_valuation", [](std::uint64_t p, std::uint64_t v) {
        return exact_valuation(p, v);
    });
    m.def("odd_double_factorial",
          [](std::uint64_t d) { return to_py(odd_double_factorial(d)); });
    m.def("d_sequence", [](std::uint64_t r, std::size_t count) {
        py::list out;
        for (const BigInt& t : d_sequence(r, count))
            out.append(to_py(t));
        return out;
    });

    // primality / factorization / powerful
    m.def("is_prime", &is_prime);
    m.def("factorize", [](std::uint64_t v) {
        py::list out;
        for (const auto& [p, e] : factorize(v).entries)
            out.append(py::make_tuple(p, e));
        return out;
    });
    m.def("factorize_big", [](const py::int_& v) {
        BigFactorization f = factorize_big(from_py(v));
        py::list entries;
        for (const auto& e : f.entries)
            entries.append(py::make_tuple(to_py(e.prime), e.exponent, e.certified));
        py::dict d;
        d["entries"] = entries;
        d["cofactor"] = to_py(f.cofactor);
        d["complete"] = f.complete();
        return d;
    });
    m.def("is_powerful", [](std::uint64_t v) { return is_powerful(v); });

    // sieve
    m.def("primes_in_range", [](std::uint64_t lo, std::uint64_t hi) {
        return primes_in_range(lo, hi);
    });
    m.def("prime_window", [](std::uint64_t n) { return prime_window(n).primes; });
    m.def("count_primes", [](std::uint64_t x) { return count_primes(x); });
    m.def("count_primes_ap", [](std::uint64_t x, std::uint64_t k, std::uint64_t l) {
        ApCount c = count_primes_ap(x, k, l);
        return py::make_tuple(c.count, c.log_sum);
    });
    m.def("window_count", [](std::uint64_t n) { return window_count(n); });
    m.def("window_count_ap",
          [](std::uint64_t n, std::uint64_t q) { return window_count_ap(n, q); });

    // certificates
    m.def("verify_tuple", [](const std::vector<std::uint64_t>& primes,
                             const std::string& mode) {
        auto failure = verify_tuple(TupleCert{primes, mode_arg(mode)});
        return py::make_tuple(!failure.has_value(), failure ? failure->detail : "");
    });
    m.def("verify_chain", [](const std::vector<std::vector<std::uint64_t>>& tuples,
                             const std::string& mode) {
        ChainResult res = verify_chain(chain_arg(tuples, mode));
        py::dict d;
        d["valid"] = res.valid();
        if (res.covered)
            d["covered"] = py::make_tuple(res.covered->lo, res.covered->hi);
        if (res.failure)
            d["reason"] = res.failure->detail;
        return d;
    });
    m.def("verify_exact_div",
          [](std::uint64_t p, std::uint64_t a, std::uint64_t n, std::uint64_t d1,
             const std::vector<std::uint64_t>& exponents) {
              auto failure = verify_exact_div(ExactDivCert{p, a, n, d1, exponents, ""});
              return py::make_tuple(!failure.has_value(), failure ? failure->detail : "");
          });
    m.def("search_chain", [](std::size_t width, std::uint64_t lo, std::uint64_t hi,
                             const std::string& mode) -> py::object {
        auto chain = search_chain(width, lo, hi, mode_arg(mode));
        if (!chain)
            return py::none();
        py::list out;
        for (const TupleCert& t : chain->tuples)
            out.append(t.primes);
        return out;
    });
    m.def("verify_cert_file", [](const std::string& path) {
        CertFile file = load_cert_file(path);
        switch (file.kind) {
        case CertFile::Kind::Chain:
            return verify_chain(std::get<ChainCert>(file.payload)).valid();
        case CertFile::Kind::ExactDiv:
            return !verify_exact_div(std::get<ExactDivCert>(file.payload)).has_value();
        case CertFile::Kind::CaseBundle:
            return verify_case_bundle(std::get<CaseBundle>(file.payload)).valid;
        }
        return false;
    });

    // oracle / prove
    m.def("omega", [](std::uint64_t ell, std::uint64_t n) { return to_py(omega(ell, n)); });
    m.def("oracle_is_powerful",
          [](std::uint64_t ell, std::uint64_t n) { return oracle_is_powerful(ell, n); });
    m.def("find_obstruction_prime",
          [](std::uint64_t n, const std::vector<std::uint64_t>& factors) -> py::object {
              auto w = find_obstruction_prime(n, factors);
              if (!w)
                  return py::none();
              return py::int_(w->p);
          });
    m.def(
        "prove",
        [](std::uint64_t n, py::object ell, py::object factors) {
            ExponentSpec spec;
            if (!ell.is_none())
                spec = ExponentSpec::from_ell(ell.cast<std::uint64_t>());
            else if (!factors.is_none())
                spec = ExponentSpec::from_factors(
                    factors.cast<std::vector<std::uint64_t>>());
            else
                throw DomainError("prove: need ell or factors");
            return verdict_dict(prove(spec, n));
        },
        py::arg("n"), py::arg("ell") = py::none(), py::arg("factors") = py::none());

    // bounds
    m.def("dusart_pi_bounds", [](std::uint64_t x) {
        auto [lo, hi] = dusart_pi_bounds(x);
        return py::make_tuple(lo, hi);
    });
    m.def("dusart_check", [](std::uint64_t x) {
        py::list out;
        for (const BoundReport& r : dusart_check(x))
            out.append(report_dict(r));
        return out;
    });
    m.def("brun_titchmarsh_check",
          [](std::uint64_t x, std::uint64_t y, std::uint64_t k, std::uint64_t l) {
              return report_dict(brun_titchmarsh_check(x, y, k, l));
          });
    m.def("pi3_lower_check", [](std::uint64_t x, std::uint64_t l) {
        return report_dict(pi3_lower_check(x, l));
    });
    m.def("window_lower_check",
          [](std::uint64_t n) { return report_dict(window_lower_check(n)); });
    m.def("window_ap_upper_check", [](std::uint64_t n, std::uint64_t q, unsigned r) {
        return report_dict(window_ap_upper_check(n, q, r));
    });
    m.def("window_ap_general_check", [](std::uint64_t n, std::uint64_t q, double C) {
        return report_dict(window_ap_general_check(n, q, C));
    });

    m.attr("__version__") = "0.1.0";
}
