#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bilinear.hpp"
#include "blowup.hpp"
#include "coding.hpp"
#include "ramsey.hpp"
#include "tk_model.hpp"
#include "transposition.hpp"

namespace fopk::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "fopk/1";

inline Json doc(const char* kind) {
    Json j;
    j["schema"] = kSchema;
    if (kind) j["kind"] = kind;
    return j;
}

inline Json parse_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline Json read_json(const std::string& path) {
    if (path == "-" || path.empty()) {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return parse_text(ss.str(), "stdin");
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

// field access with a parse error naming the field
template <class T>
T get(const Json& j, const char* field) {
    if (!j.is_object() || !j.contains(field)) throw ParseError("missing field '" + std::string(field) + "'");
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError("field '" + std::string(field) + "' has the wrong type");
    }
}
template <class T>
T get_or(const Json& j, const char* field, T dflt) {
    if (!j.is_object() || !j.contains(field)) return dflt;
    return get<T>(j, field);
}

inline void expect_kind(const Json& j, const char* kind) {
    if (!j.is_object()) throw ParseError("document must be an object");
    if (j.contains("kind") && j["kind"] != kind)
        throw ParseError("kind: expected '" + std::string(kind) + "', got " + j["kind"].dump());
    if (j.contains("schema") && j["schema"] != kSchema) throw ParseError("schema: expected " + std::string(kSchema));
}

using Pairs = std::vector<std::pair<Tuple, int>>;

inline Json pairs_json(const Pairs& ps) {
    Json a = Json::array();
    for (const auto& [t, w] : ps) a.push_back(Json::array({t, w}));
    return a;
}
inline Pairs pairs_of(const Json& j, const char* field) {
    Pairs out;
    if (!j.contains(field)) return out;
    const Json& a = j[field];
    if (!a.is_array()) throw ParseError("field '" + std::string(field) + "' must be an array");
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_array() || !e[1].is_number_integer())
            throw ParseError("field '" + std::string(field) + "': entries must be [[tuple], id]");
        out.emplace_back(e[0].get<Tuple>(), e[1].get<int>());
    }
    return out;
}

// ---- core ----

inline Json to_json(const TkModel& M) {
    Json j = doc("tk_model");
    TkModel m = M;
    m.normalize();
    j["k"] = m.k;
    j["part_sizes"] = m.part_sizes;
    j["qorder"] = m.qorder;
    j["R"] = pairs_json(m.r);
    if (!m.labels.empty()) j["labels"] = m.labels;
    return j;
}

inline TkModel model_from_json(const Json& j) {
    expect_kind(j, "tk_model");
    TkModel M;
    M.k = get<int>(j, "k");
    M.part_sizes = get<std::vector<int>>(j, "part_sizes");
    M.qorder = get<std::vector<Tuple>>(j, "qorder");
    M.r = pairs_of(j, "R");
    M.labels = get_or<std::vector<int>>(j, "labels", {});
    check_structure(M);
    M.normalize();
    return M;
}

inline Json item_json(const StarItem& it) { return it.is_point() ? Json(it.point) : Json(it.tuple); }
inline StarItem item_of(const Json& j) {
    StarItem it;
    if (j.is_number_integer()) it.point = j.get<int>();
    else if (j.is_array()) it.tuple = j.get<Tuple>();
    else throw ParseError("star item must be an id or a tuple");
    return it;
}
inline Json star_json(const std::vector<StarItem>& s) {
    Json a = Json::array();
    for (const auto& it : s) a.push_back(item_json(it));
    return a;
}
inline std::vector<StarItem> star_of(const Json& a) {
    if (!a.is_array()) throw ParseError("ranking must be an array");
    std::vector<StarItem> out;
    for (const auto& e : a) out.push_back(item_of(e));
    return out;
}

inline Json report_json(const ValidationReport& rep) {
    Json j = doc("validation_report");
    j["valid"] = rep.ok();
    Json vs = Json::array();
    for (const auto& v : rep.violations) {
        Json x;
        x["axiom"] = v.axiom;
        x["message"] = v.message;
        x["witness"] = v.witness;
        vs.push_back(x);
    }
    j["violations"] = vs;
    return j;
}

// ---- blow-up ----

inline Json to_json(const BaseStructure& B) {
    Json j = doc("base");
    j["n"] = B.n;
    j["u"] = B.u;
    return j;
}
inline BaseStructure base_from_json(const Json& j) {
    expect_kind(j, "base");
    BaseStructure B;
    B.n = get<int>(j, "n");
    B.u = get<std::vector<int>>(j, "u");
    check_base(B);
    return B;
}
inline Json to_json(const BlowupSpec& S) {
    Json j = doc("blowup_spec");
    Json b = to_json(S.base);
    b.erase("schema");
    j["base"] = b;
    j["part_sizes"] = S.part_sizes;
    j["f"] = pairs_json(S.f);
    return j;
}
inline BlowupSpec spec_from_json(const Json& j) {
    expect_kind(j, "blowup_spec");
    BlowupSpec S;
    if (!j.contains("base")) throw ParseError("missing field 'base'");
    S.base = base_from_json(j["base"]);
    S.part_sizes = get<std::vector<int>>(j, "part_sizes");
    S.f = pairs_of(j, "f");
    return S;
}

// ---- coding ----

inline Json to_json(const PartiteHypergraph& E) {
    Json j = doc("partite_hypergraph");
    j["k"] = E.k;
    j["part_sizes"] = E.part_sizes;
    j["edges"] = E.edges;
    return j;
}
inline PartiteHypergraph hypergraph_from_json(const Json& j) {
    expect_kind(j, "partite_hypergraph");
    PartiteHypergraph E;
    E.k = get<int>(j, "k");
    E.part_sizes = get<std::vector<int>>(j, "part_sizes");
    E.edges = get<std::vector<Tuple>>(j, "edges");
    check_hypergraph(E);
    return E;
}

inline Json to_json(const Witness& w) {
    Json j = doc("witness");
    j["format"] = format_name(w.format);
    j["k"] = w.k;
    j["n"] = w.n;
    switch (w.format) {
        case WFormat::Grid:
        case WFormat::IpGrid:
            j["a"] = w.a;
            j["b"] = w.b;
            break;
        case WFormat::Array:
            j["arr"] = w.arr;
            j["b"] = w.b;
            break;
        case WFormat::Order:
            j["order"] = star_json(w.order);
            j["seq"] = w.seq;
            break;
        case WFormat::Partition:
            j["s"] = w.s;
            j["labels"] = w.labels;
            j["seq"] = w.seq;
            j["b"] = w.bpart;
            break;
    }
    return j;
}
inline Witness witness_from_json(const Json& j) {
    expect_kind(j, "witness");
    Witness w;
    w.format = parse_format(get<std::string>(j, "format"));
    w.k = get<int>(j, "k");
    w.n = get<int>(j, "n");
    using VV = std::vector<std::vector<int>>;
    switch (w.format) {
        case WFormat::Grid:
        case WFormat::IpGrid:
            w.a = get<std::vector<int>>(j, "a");
            w.b = get<VV>(j, "b");
            break;
        case WFormat::Array:
            w.arr = get<VV>(j, "arr");
            w.b = get<VV>(j, "b");
            break;
        case WFormat::Order:
            if (!j.contains("order")) throw ParseError("missing field 'order'");
            w.order = star_of(j["order"]);
            w.seq = get<VV>(j, "seq");
            break;
        case WFormat::Partition:
            w.s = get<int>(j, "s");
            w.labels = get<std::vector<int>>(j, "labels");
            w.seq = get<VV>(j, "seq");
            w.bpart = get<std::vector<int>>(j, "b");
            break;
    }
    return w;
}

// ---- functional and pre-model classes ----

inline Json to_json(const FnStructure& X) {
    Json j = doc("lfk_structure");
    FnStructure x = X;
    x.normalize();
    j["k"] = x.k;
    j["part_sizes"] = x.part_sizes;
    j["f"] = pairs_json(x.f);
    j["ordered"] = x.ordered;
    return j;
}
inline FnStructure fn_from_json(const Json& j) {
    expect_kind(j, "lfk_structure");
    FnStructure X;
    X.k = get<int>(j, "k");
    X.part_sizes = get<std::vector<int>>(j, "part_sizes");
    X.f = pairs_of(j, "f");
    X.ordered = get_or<bool>(j, "ordered", true);
    detail::check_shape(X, "lfk_structure");
    X.normalize();
    return X;
}

inline Json to_json(const PreModel& P) {
    Json j = doc("pre_model");
    PreModel x = P;
    x.normalize();
    j["k"] = x.k;
    j["part_sizes"] = x.part_sizes;
    j["blocks"] = x.blocks;
    j["R"] = pairs_json(x.r);
    return j;
}
inline PreModel pre_from_json(const Json& j) {
    if (j.is_object() && j.value("kind", "") == "tk_model") return as_pre_model(model_from_json(j));
    expect_kind(j, "pre_model");
    PreModel P;
    P.k = get<int>(j, "k");
    P.part_sizes = get<std::vector<int>>(j, "part_sizes");
    P.blocks = get<std::vector<std::vector<Tuple>>>(j, "blocks");
    P.r = pairs_of(j, "R");
    detail::check_shape(P, "pre_model");
    P.normalize();
    return P;
}

// ---- bilinear ----

inline Json to_json(const FormSpace& S) {
    Json j = doc("form_space");
    j["p"] = S.p;
    j["dim"] = S.dim;
    j["arity"] = S.arity;
    j["tensor"] = S.tensor;
    j["symmetry"] = symmetry_name(S.symmetry);
    return j;
}
inline FormSpace space_from_json(const Json& j) {
    expect_kind(j, "form_space");
    FormSpace S;
    S.p = get<int>(j, "p");
    S.dim = get<int>(j, "dim");
    S.arity = get<int>(j, "arity");
    S.tensor = get<std::vector<int>>(j, "tensor");
    S.symmetry = parse_symmetry(get_or<std::string>(j, "symmetry", "none"));
    check_space(S);
    return S;
}

inline Json error_json(const std::string& kind, const std::string& message) {
    Json j = doc("error");
    j["error"] = {{"kind", kind}, {"message", message}};
    return j;
}

}  // namespace fopk::io
