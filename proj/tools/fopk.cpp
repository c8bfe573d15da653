#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fopk/json_io.hpp"

using namespace fopk;
using fopk::io::Json;

namespace {

// exit 1 with a result document (as opposed to an error document)
struct SoftFailure {
    Json doc;
};

struct Globals {
    std::string out = "-";
    std::string format = "json";
    uint64_t seed = 0;
    uint64_t budget = 50'000'000;
};

std::vector<int> int_list(const std::string& s, const char* what) {
    std::vector<int> v;
    if (s.empty()) return v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            v.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError(std::string(what) + ": bad integer '" + tok + "'");
        }
    }
    return v;
}

// "1,0;0,1" -> {{1,0},{0,1}}
std::vector<std::vector<int>> vec_list(const std::string& s, const char* what) {
    std::vector<std::vector<int>> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) out.push_back(int_list(tok, what));
    return out;
}

Json witness_reason(bool ok, const std::string& why) {
    Json j;
    j["valid"] = ok;
    if (!ok) j["reason"] = why;
    return j;
}

TkModel load_model(const std::string& path) { return io::model_from_json(io::read_json(path)); }

struct Cmd {
    CLI::App* app;
    std::function<Json()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fopk: finite T_k models, FOP_k witnesses, functional classes and forms over F_p"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "output path (default: standard output)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json"}));
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--budget", g.budget, "search node budget");

    std::vector<Cmd> cmds;
    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

    // ---- core_structures ----
    std::string in;
    {
        auto* c = sub("validate", "validate a T_k model");
        c->add_option("--in", in, "model")->default_val("-");
        cmds.push_back({c, [&] {
                            TkModel M = load_model(in);
                            auto rep = validate_tk(M);
                            Json j = io::report_json(rep);
                            if (!rep.ok()) throw SoftFailure{j};
                            return j;
                        }});
    }
    int k = 0;
    std::string sizes;
    bool count_only = false;
    int limit = -1;
    {
        auto* c = sub("enumerate", "enumerate all models with given part sizes");
        c->add_option("--k", k)->required();
        c->add_option("--sizes", sizes, "comma separated |P_1|..|P_{k+1}|")->required();
        c->add_flag("--count-only", count_only);
        c->add_option("--limit", limit, "emit at most this many models");
        cmds.push_back({c, [&] {
                            auto ps = int_list(sizes, "sizes");
                            if (static_cast<int>(ps.size()) != k + 1) throw ParseError("sizes: expected k+1 entries");
                            Json j = io::doc("model_list");
                            uint64_t count = 0;
                            Json models = Json::array();
                            for_each_model(k, ps, [&](const TkModel& M) {
                                ++count;
                                if (!count_only && (limit < 0 || static_cast<int>(models.size()) < limit))
                                    models.push_back(io::to_json(M));
                            });
                            j["count"] = count;
                            if (!count_only) j["models"] = models;
                            return j;
                        }});
    }
    {
        auto* c = sub("star-order", "star order of a model");
        c->add_option("--in", in)->default_val("-");
        cmds.push_back({c, [&] {
                            TkModel M = load_model(in);
                            Json j = io::doc("star_order");
                            j["k"] = M.k;
                            j["part_sizes"] = M.part_sizes;
                            j["ranking"] = io::star_json(star_order(M));
                            return j;
                        }});
    }
    {
        auto* c = sub("from-star", "model from a star-order ranking");
        c->add_option("--in", in, "star_order document")->default_val("-");
        cmds.push_back({c, [&] {
                            Json d = io::read_json(in);
                            io::expect_kind(d, "star_order");
                            if (!d.contains("ranking")) throw ParseError("missing field 'ranking'");
                            return io::to_json(from_star_order(io::get<int>(d, "k"),
                                                               io::get<std::vector<int>>(d, "part_sizes"),
                                                               io::star_of(d["ranking"])));
                        }});
    }
    std::string tuple, lang = "Lk";
    {
        auto* c = sub("qftype", "quantifier-free type fingerprint of a tuple");
        c->add_option("--in", in)->default_val("-");
        c->add_option("--tuple", tuple, "comma separated element ids")->required();
        c->add_option("--lang", lang, "Lk | L'k | L''k | LQk");
        cmds.push_back({c, [&] {
                            TkModel M = load_model(in);
                            auto fp = qf_type(M, int_list(tuple, "tuple"), parse_lang(lang));
                            Json j = io::doc("qf_type");
                            j["lang"] = lang_name(fp.lang);
                            j["fingerprint"] = fp.hex();
                            return j;
                        }});
    }
    std::string fa, fb, fc, fd, fm, fn_;
    {
        auto* c = sub("embed", "all embeddings of A into C");
        c->add_option("--A", fa)->required();
        c->add_option("--C", fc)->required();
        cmds.push_back({c, [&] {
                            auto embs = find_embeddings(load_model(fa), load_model(fc));
                            Json j = io::doc("embeddings");
                            j["count"] = embs.size();
                            j["embeddings"] = embs;
                            return j;
                        }});
    }

    // ---- blowup_fraisse ----
    {
        auto* c = sub("blowup", "blow up a base structure");
        c->add_option("--in", in, "blowup_spec")->default_val("-");
        cmds.push_back({c, [&] { return io::to_json(blow_up(io::spec_from_json(io::read_json(in)))); }});
    }
    {
        auto* c = sub("recover", "recover the base structure of a model");
        c->add_option("--in", in)->default_val("-");
        cmds.push_back({c, [&] { return io::to_json(recover_base(load_model(in))); }});
    }
    std::string emb1, emb2;
    {
        auto* c = sub("amalgamate", "amalgamate M and N over D");
        c->add_option("--D", fd)->required();
        c->add_option("--M", fm)->required();
        c->add_option("--N", fn_)->required();
        c->add_option("--emb1", emb1, "D -> M, comma separated");
        c->add_option("--emb2", emb2, "D -> N, comma separated");
        cmds.push_back({c, [&] {
                            auto r = amalgamate(load_model(fd), load_model(fm), load_model(fn_), int_list(emb1, "emb1"),
                                                int_list(emb2, "emb2"));
                            Json j = io::doc("amalgam");
                            j["C"] = io::to_json(r.C);
                            j["f1"] = r.f1;
                            j["f2"] = r.f2;
                            return j;
                        }});
    }
    {
        auto* c = sub("generic-extend", "extend a model towards the generic one");
        c->add_option("--in", in)->default_val("-");
        c->add_option("--sizes", sizes, "target part sizes")->required();
        cmds.push_back({c, [&] {
                            auto r = generic_extend(load_model(in), int_list(sizes, "sizes"), g.seed);
                            Json j = io::doc("extension");
                            j["model"] = io::to_json(r.model);
                            j["map"] = r.map;
                            return j;
                        }});
    }

    // ---- coding_detector ----
    std::string fh, fe, fw, verify, to, target;
    {
        auto* c = sub("code-search", "search for an R-coding of H in E");
        c->add_option("--H", fh)->required();
        c->add_option("--E", fe)->required();
        c->add_option("--verify", verify, "check this assignment instead of searching");
        cmds.push_back({c, [&] {
                            TkModel H = load_model(fh);
                            auto E = io::hypergraph_from_json(io::read_json(fe));
                            Json j = io::doc("r_coding");
                            if (!verify.empty()) {
                                std::string why;
                                bool ok = verify_r_coding(H, E, int_list(verify, "verify"), &why);
                                j.update(witness_reason(ok, why));
                                if (!ok) throw SoftFailure{j};
                                return j;
                            }
                            uint64_t nodes = 0;
                            auto a = find_r_coding(H, E, g.budget, &nodes);
                            j["found"] = a.has_value();
                            if (a) j["assignment"] = *a;
                            j["nodes"] = nodes;
                            return j;
                        }});
    }
    {
        auto* c = sub("fop-check", "check a witness against a hypergraph");
        c->add_option("--E", fe)->required();
        c->add_option("--W", fw)->required();
        cmds.push_back({c, [&] {
                            auto E = io::hypergraph_from_json(io::read_json(fe));
                            auto w = io::witness_from_json(io::read_json(fw));
                            std::string why;
                            bool ok = fop_witness_check(E, w, &why);
                            Json j = io::doc("witness_check");
                            j.update(witness_reason(ok, why));
                            if (!ok) throw SoftFailure{j};
                            return j;
                        }});
    }
    {
        auto* c = sub("convert-witness", "convert a witness to another format");
        c->add_option("--W", fw)->required();
        c->add_option("--to", to, "grid | array | order | partition")->required();
        c->add_option("--E", fe, "hypergraph to re-check the output against");
        c->add_option("--target", target, "star_order document fixing the order (grid -> order)");
        cmds.push_back({c, [&] {
                            auto w = io::witness_from_json(io::read_json(fw));
                            std::vector<StarItem> tgt;
                            if (!target.empty()) {
                                Json d = io::read_json(target);
                                if (!d.contains("ranking")) throw ParseError("missing field 'ranking'");
                                tgt = io::star_of(d["ranking"]);
                            }
                            Witness o = convert_witness(w, parse_format(to), target.empty() ? nullptr : &tgt);
                            Json j = io::to_json(o);
                            if (!fe.empty()) {
                                std::string why;
                                bool ok = fop_witness_check(io::hypergraph_from_json(io::read_json(fe)), o, &why);
                                j["check"] = witness_reason(ok, why);
                                if (!ok) throw SoftFailure{j};
                            }
                            return j;
                        }});
    }
    int n = 0;
    {
        auto* c = sub("ip-search", "search for an IP_k grid of side n");
        c->add_option("--E", fe)->required();
        c->add_option("--n", n)->required();
        cmds.push_back({c, [&] {
                            auto w = find_ip_grid(io::hypergraph_from_json(io::read_json(fe)), n, g.budget);
                            Json j = io::doc("ip_search");
                            j["found"] = w.has_value();
                            if (w) j["witness"] = io::to_json(*w);
                            return j;
                        }});
    }

    // ---- transposition_products ----
    {
        auto* c = sub("transpose-classify", "classify a pair of models as a transposition");
        c->add_option("--A1", fa)->required();
        c->add_option("--A2", fb)->required();
        cmds.push_back({c, [&] {
                            auto t = classify_transposition(load_model(fa), load_model(fb));
                            Json j = io::doc("transposition");
                            if (!t) {
                                j["transposition"] = nullptr;
                            } else {
                                j["transposition"] = {{"kind", t->kind == TranspositionKind::QP ? "QP" : "QQ"},
                                                      {"alpha", io::item_json(t->alpha)},
                                                      {"beta", io::item_json(t->beta)}};
                            }
                            return j;
                        }});
    }
    {
        auto* c = sub("transpose-path", "transposition path from A to B");
        c->add_option("--A", fa)->required();
        c->add_option("--B", fb)->required();
        cmds.push_back({c, [&] {
                            TkModel A = load_model(fa), B = load_model(fb);
                            auto path = transposition_path(A, B);
                            Json j = io::doc("transposition_path");
                            j["length"] = path.size();
                            j["kendall_tau"] = kendall_tau(star_order(A), star_order(B));
                            Json ms = Json::array();
                            for (const auto& M : path) ms.push_back(io::to_json(M));
                            j["models"] = ms;
                            return j;
                        }});
    }
    std::string kind, sel_e, sel_d;
    int sel_v = -1;
    {
        auto* c = sub("product", "the QP or QQ product of A and B at an adjacent pair");
        c->add_option("--A", fa)->required();
        c->add_option("--B", fb)->required();
        c->add_option("--kind", kind)->required()->check(CLI::IsMember({"qp", "qq"}));
        c->add_option("--e", sel_e, "tuple e (comma separated ids)")->required();
        c->add_option("--v", sel_v, "point v (qp)");
        c->add_option("--d", sel_d, "tuple d (qq)");
        cmds.push_back({c, [&] {
                            TkModel A = load_model(fa), B = load_model(fb);
                            ProductResult r;
                            if (kind == "qp") {
                                if (sel_v < 0) throw DomainError("product qp needs --v");
                                r = product_qp(A, int_list(sel_e, "e"), sel_v, B);
                            } else {
                                if (sel_d.empty()) throw DomainError("product qq needs --d");
                                r = product_qq(A, int_list(sel_d, "d"), int_list(sel_e, "e"), B);
                            }
                            Json j = io::doc("product");
                            j["model"] = io::to_json(r.C);
                            j["from_a"] = r.from_a;
                            j["from_b"] = r.from_b;
                            if (r.i_star >= 0) j["i_star"] = r.i_star + 1;
                            Json ch;
                            for (const auto& [name, ok] : r.checks) ch[name] = ok;
                            j["checks"] = ch;
                            if (!r.all_checks()) throw SoftFailure{j};
                            return j;
                        }});
    }

    // ---- ramsey_lab ----
    std::string cls;
    {
        auto* c = sub("class-validate", "validate membership in Rk, OrderedRk, Sk or HkPre");
        c->add_option("--in", in)->default_val("-");
        c->add_option("--class", cls)->required()->check(CLI::IsMember({"Rk", "OrderedRk", "Sk", "HkPre"}));
        cmds.push_back({c, [&] {
                            Json d = io::read_json(in);
                            ValidationReport rep;
                            if (cls == "HkPre") {
                                rep = validate_pre(io::pre_from_json(d));
                            } else {
                                FnClass fc2 = cls == "Rk" ? FnClass::Rk : cls == "Sk" ? FnClass::Sk : FnClass::OrderedRk;
                                rep = validate_fn(io::fn_from_json(d), fc2);
                            }
                            Json j = io::report_json(rep);
                            j["class"] = cls;
                            if (!rep.ok()) throw SoftFailure{j};
                            return j;
                        }});
    }
    {
        auto* c = sub("to-functional", "B_f of a pre-order model");
        c->add_option("--in", in)->default_val("-");
        cmds.push_back({c, [&] {
                            auto r = to_functional(io::pre_from_json(io::read_json(in)));
                            Json j = io::doc("functional");
                            j["structure"] = io::to_json(r.C);
                            j["map"] = r.map;
                            j["block_point"] = r.block_point;
                            return j;
                        }});
    }
    {
        auto* c = sub("to-relational", "C_R of an S_k structure");
        c->add_option("--in", in)->default_val("-");
        cmds.push_back({c, [&] {
                            auto r = to_relational(io::fn_from_json(io::read_json(in)));
                            Json j = io::doc("relational");
                            j["pre_model"] = io::to_json(r.P);
                            j["map"] = r.map;
                            return j;
                        }});
    }
    std::string ids;
    {
        auto* c = sub("phi", "phi_C(D): ids of C_R");
        c->add_option("--C", fc)->required();
        c->add_option("--D", ids, "comma separated ids of C");
        cmds.push_back({c, [&] {
                            Json j = io::doc("substructure");
                            j["ids"] = phi(io::fn_from_json(io::read_json(fc)), int_list(ids, "D"));
                            return j;
                        }});
    }
    {
        auto* c = sub("psi", "psi_C(W): ids of C");
        c->add_option("--C", fc)->required();
        c->add_option("--W", ids, "comma separated ids of C_R");
        cmds.push_back({c, [&] {
                            Json j = io::doc("substructure");
                            j["ids"] = psi(io::fn_from_json(io::read_json(fc)), int_list(ids, "W"));
                            return j;
                        }});
    }
    int colors = 2;
    {
        auto* c = sub("ramsey", "decide C -> (B)^A_n by exhaustive colouring search");
        c->add_option("--C", fc)->required();
        c->add_option("--B", fb)->required();
        c->add_option("--A", fa)->required();
        c->add_option("--colors", colors)->check(CLI::PositiveNumber);
        cmds.push_back({c, [&] {
                            Json jc = io::read_json(fc), jb = io::read_json(fb), ja = io::read_json(fa);
                            bool fnk = jc.is_object() && jc.value("kind", "") == "lfk_structure";
                            ArrowResult r = fnk ? ramsey_arrow(io::fn_from_json(jc), io::fn_from_json(jb),
                                                               io::fn_from_json(ja), colors, g.budget)
                                                : ramsey_arrow(io::model_from_json(jc), io::model_from_json(jb),
                                                               io::model_from_json(ja), colors, g.budget);
                            Json j = io::doc("ramsey_arrow");
                            j["holds"] = r.holds;
                            j["a_embeddings"] = r.a_embeddings.size();
                            j["b_copies"] = r.b_copies;
                            j["space"] = r.space;
                            j["examined"] = r.examined;
                            j["method"] = r.method;
                            if (!r.holds) {
                                j["coloring"] = r.coloring;
                                j["embeddings"] = r.a_embeddings;
                            }
                            return j;
                        }});
    }

    // ---- bilinear_lab ----
    std::string fs, vectors, wvec, avals, sigma, mode, term, gram_w, dvals, bvals, labels;
    int arity = -1, trials = 200;
    auto load_space = [&] { return io::space_from_json(io::read_json(fs)); };
    {
        auto* c = sub("bf-g", "g_{n,i} coordinates of w over v");
        c->add_option("--space", fs)->required();
        c->add_option("--v", vectors, "vectors, ';' separated")->required();
        c->add_option("--w", wvec)->required();
        cmds.push_back({c, [&] {
                            FormSpace S = load_space();
                            auto vs = vec_list(vectors, "v");
                            for (const auto& v : vs) check_vec(S, v, "bf-g");
                            Vec w = int_list(wvec, "w");
                            check_vec(S, w, "bf-g");
                            Json j = io::doc("g_coords");
                            j["coords"] = g_coords(S, vs, w);
                            return j;
                        }});
    }
    {
        auto* c = sub("bf-solve", "v with beta(v, w_i) = a_i");
        c->add_option("--space", fs)->required();
        c->add_option("--w", vectors, "vectors, ';' separated")->required();
        c->add_option("--a", avals)->required();
        cmds.push_back({c, [&] {
                            Json j = io::doc("form_solution");
                            j["v"] = solve_form_values(load_space(), vec_list(vectors, "w"), int_list(avals, "a"));
                            return j;
                        }});
    }
    {
        auto* c = sub("bf-gram", "realize a value grid sigma on [n]^k");
        c->add_option("--space", fs)->required();
        c->add_option("--n", n)->required();
        c->add_option("--sigma", sigma, "row-major values")->required();
        cmds.push_back({c, [&] {
                            Json j = io::doc("gram_realization");
                            j["arrays"] = realize_gram(load_space(), n, int_list(sigma, "sigma"));
                            return j;
                        }});
    }
    {
        auto* c = sub("bf-basis", "symplectic or orthonormal basis");
        c->add_option("--space", fs)->required();
        c->add_option("--mode", mode)->required()->check(CLI::IsMember({"symplectic", "orthonormal"}));
        cmds.push_back({c, [&] {
                            FormSpace S = load_space();
                            auto B = canonical_basis(S, parse_basis_mode(mode));
                            Json j = io::doc("basis");
                            j["mode"] = mode;
                            j["basis"] = B;
                            j["gram"] = gram(S, B);
                            return j;
                        }});
    }
    {
        auto* c = sub("bf-term", "eliminate f from a term");
        c->add_option("--term", term, "s-expression")->required();
        c->add_option("--arity", arity, "arity of f (default: unchecked)");
        c->add_option("--space", fs, "form space for the soundness check");
        c->add_option("--trials", trials, "random assignments for the soundness check");
        cmds.push_back({c, [&] {
                            Term t = parse_term(term);
                            int ar = arity;
                            FormSpace S;
                            if (!fs.empty()) {
                                S = load_space();
                                ar = S.arity;
                            }
                            auto e = eliminate_form_terms(t, ar);
                            Json j = io::doc("term_elimination");
                            j["input"] = term_str(t);
                            j["result"] = term_str(e.result);
                            j["v_vars"] = e.v_vars;
                            Json um = Json::object();
                            for (const auto& [u, names] : e.u_map) um[u] = names;
                            j["u_map"] = um;
                            if (!fs.empty()) {
                                auto rep = check_elimination(S, t, e, trials, g.seed);
                                j["checked"] = rep.checked;
                                j["mismatches"] = rep.mismatches;
                                if (rep.mismatches) throw SoftFailure{j};
                            }
                            return j;
                        }});
    }
    {
        auto* c = sub("bf-ext", "realize an extension pair over w");
        c->add_option("--space", fs)->required();
        c->add_option("--w", vectors, "vectors, ';' separated");
        c->add_option("--gram", gram_w, "gram of f on w, row-major");
        c->add_option("--d", dvals, "f(y,y), f(y,w_i).., f(w_i,y)..")->required();
        cmds.push_back({c, [&] {
                            FormSpace S = load_space();
                            ExtensionPair P{int_list(gram_w, "gram"), int_list(dvals, "d")};
                            auto y = realize_extension_pair(S, P, vec_list(vectors, "w"));
                            Json j = io::doc("extension_realization");
                            j["realized"] = y.has_value();
                            if (y) j["y"] = *y;
                            else throw SoftFailure{j};
                            return j;
                        }});
    }
    int bigN = 0;
    {
        auto* c = sub("bf-fop", "FOP_k witness data from a prescribed order on field values");
        c->add_option("--space", fs)->required();
        c->add_option("--b", bvals, "field values b_1..b_s")->required();
        c->add_option("--N", bigN)->required();
        c->add_option("--labels", labels, "label in 1..s of each cell of [N]^k, lexicographic")->required();
        cmds.push_back({c, [&] {
                            FormSpace S = load_space();
                            auto b = int_list(bvals, "b");
                            std::vector<std::vector<bool>> psi(b.size(), std::vector<bool>(b.size()));
                            for (size_t j2 = 0; j2 < b.size(); ++j2)
                                for (size_t u = 0; u < b.size(); ++u) psi[j2][u] = j2 <= u;
                            auto r = fop_from_field_order(S, b, bigN, int_list(labels, "labels"), psi);
                            auto E = field_fop_hypergraph(S, b, r);
                            auto w = field_fop_witness(r);
                            std::string why;
                            bool ok = fop_witness_check(E, w, &why);
                            Json j = io::doc("field_fop");
                            j["c"] = r.c;
                            j["d"] = r.d;
                            j["hypergraph"] = io::to_json(E);
                            j["witness"] = io::to_json(w);
                            j["check"] = witness_reason(ok, why);
                            if (!ok) throw SoftFailure{j};
                            return j;
                        }});
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto emit = [&](const Json& j) {
        std::string text = j.dump(2) + "\n";
        if (g.out == "-") {
            std::cout << text;
        } else {
            std::ofstream o(g.out);
            if (!o) {
                std::cerr << "cannot write '" << g.out << "'\n";
                return false;
            }
            o << text;
        }
        return true;
    };

    for (auto& c : cmds) {
        if (!c.app->parsed()) continue;
        try {
            return emit(c.run()) ? 0 : 1;
        } catch (const SoftFailure& f) {
            emit(f.doc);
            return 1;
        } catch (const Error& e) {
            emit(io::error_json(e.kind(), e.what()));
            return 1;
        } catch (const std::exception& e) {
            emit(io::error_json("internal", e.what()));
            return 1;
        }
    }
    return 2;
}
