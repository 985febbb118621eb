// Python bindings. The surface is deliberately small: byte-oriented
// wrappers around key generation, the stream cipher, key analysis, and
// the attack driver. Matrices cross the boundary in the same record
// format the CLI writes, so keys are interchangeable between the two.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "feam/attacks.hpp"
#include "feam/cipher.hpp"
#include "feam/io.hpp"
#include "feam/keyspace.hpp"
#include "feam/oracle.hpp"

namespace py = pybind11;

namespace {

py::bytes to_pybytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> to_vec(const py::bytes& b) {
    const std::string s = b;
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

py::int_ to_pyint(const feam::keyspace::BigInt& v) {
    // cpp_int has no direct CPython conversion; go through its decimal
    // representation, which PyLong parses exactly.
    return py::reinterpret_steal<py::int_>(
        PyLong_FromString(v.str().c_str(), nullptr, 10));
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

py::bytes py_keygen(std::size_t n, std::optional<std::uint64_t> seed,
                    bool strict, std::uint64_t min_order) {
    feam::DetPrng prng(seed ? *seed : entropy_seed());
    feam::SessionSecrets s = feam::keygen_session(prng, n);
    unsigned redraws = 0;
    while (strict && !feam::keyspace::screen_key(s.k, min_order).accepted) {
        if (++redraws > 256) throw feam::ExhaustedError();
        s = feam::keygen_session(prng, n);
    }
    return to_pybytes(feam::session_to_bytes(s));
}

py::bytes py_encrypt(const py::bytes& key, const py::bytes& data) {
    const feam::SessionSecrets s = feam::session_from_bytes(to_vec(key));
    return to_pybytes(feam::encrypt_stream(s, to_vec(data)));
}

py::bytes py_decrypt(const py::bytes& key, const py::bytes& data) {
    const feam::SessionSecrets s = feam::session_from_bytes(to_vec(key));
    return to_pybytes(feam::decrypt_stream(s, to_vec(data)));
}

py::dict py_analyze(const py::bytes& key, std::uint64_t min_order) {
    const std::vector<std::uint8_t> data = to_vec(key);
    std::size_t offset = 0;
    const feam::BoolMatrix k = feam::io::read_matrix(data, offset);
    const feam::keyspace::KeyAnalysis a =
        feam::keyspace::analyze_key(k, min_order);
    py::dict d;
    d["n"] = k.dim();
    d["order"] = a.order ? py::object(to_pyint(*a.order)) : py::none();
    d["group_order"] = to_pyint(a.group_order);
    d["min_order"] = a.min_order;
    d["weak"] = a.weak;
    return d;
}

py::dict py_attack(const std::string& kind, std::size_t n,
                   const std::string& oracle_mode, unsigned trials,
                   std::uint64_t seed) {
    feam::OracleMode mode;
    if (oracle_mode == "insecure") mode = feam::OracleMode::insecure;
    else if (oracle_mode == "secure") mode = feam::OracleMode::secure;
    else if (oracle_mode == "resumable") mode = feam::OracleMode::resumable;
    else throw std::invalid_argument("unknown oracle mode: " + oracle_mode);
    const bool cpa = kind == "cpa";
    if (!cpa && kind != "cca")
        throw std::invalid_argument("unknown attack kind: " + kind);

    feam::DetPrng derive(seed);
    feam::DetPrng master_rng(derive.next());
    const std::uint64_t system_seed = derive.next();
    feam::DetPrng attacker(derive.next());
    feam::DetPrng tampers(derive.next());
    feam::Oracle oracle({n, mode, feam::MasterKey::create(master_rng, n),
                         system_seed});

    unsigned k_ok = 0, verified = 0, direct = 0, fallback = 0, failed = 0;
    std::uint64_t bits_sum = 0;
    for (unsigned t = 0; t < trials; ++t) {
        const feam::attacks::AttackTranscript tr =
            cpa ? feam::attacks::run_cpa(oracle, attacker, tampers.next(), {})
                : feam::attacks::run_cca(oracle, attacker, tampers.next(), {});
        if (tr.k_verified) ++k_ok;
        if (tr.verified) ++verified;
        switch (tr.v_path) {
            case feam::attacks::VPath::direct: ++direct; break;
            case feam::attacks::VPath::fallback: ++fallback; break;
            default: ++failed; break;
        }
        bits_sum += tr.chosen_bits;
    }
    py::dict d;
    d["trials"] = trials;
    d["k_recovered"] = k_ok;
    d["verified"] = verified;
    d["v_direct"] = direct;
    d["v_fallback"] = fallback;
    d["v_failed"] = failed;
    d["mean_chosen_bits"] = trials ? double(bits_sum) / trials : 0.0;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Boolean-matrix session cipher: keygen, stream encryption, "
              "key-order analysis, and differential attack trials";

    m.def("keygen", &py_keygen, py::arg("n"), py::arg("seed") = py::none(),
          py::arg("strict") = false,
          py::arg("min_order") = feam::keyspace::kDefaultMinOrder,
          "Generate a session key; returns the serialized key file bytes.");
    m.def("encrypt", &py_encrypt, py::arg("key"), py::arg("data"),
          "Encrypt a byte string under a serialized session key.");
    m.def("decrypt", &py_decrypt, py::arg("key"), py::arg("data"),
          "Decrypt a byte string under a serialized session key.");
    m.def("analyze_key", &py_analyze, py::arg("key"),
          py::arg("min_order") = feam::keyspace::kDefaultMinOrder,
          "Report a key's multiplicative order and the group order.");
    m.def("run_attack", &py_attack, py::arg("kind") = "cpa",
          py::arg("n") = std::size_t{8}, py::arg("oracle") = "insecure",
          py::arg("trials") = 10u, py::arg("seed") = std::uint64_t{1},
          "Run differential attack trials against a simulated oracle.");
    m.def("group_order",
          [](std::size_t n) { return to_pyint(feam::keyspace::group_order(n)); },
          py::arg("n"), "Order of the group of invertible n-by-n bit matrices.");

    m.attr("__version__") = "1.0.0";
}
