#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>
#include <tuple>

#include "trank/bounds.hpp"
#include "trank/directsum.hpp"
#include "trank/error.hpp"
#include "trank/io.hpp"
#include "trank/oracle.hpp"

using namespace trank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBoundOnly = 3;
constexpr int kExitPositiveDefect = 4;
constexpr int kExitNegativeDefect = 5;

struct Options {
    std::string field = "gf2";
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultBudget;
    std::size_t max_rank = kDefaultMaxRank;
    bool json = false;
    std::string out;
    std::string axis;
    bool all = false;
    std::size_t slices = 3;
    std::string dossier = "additivity_dossier.json";
    std::vector<std::size_t> ranks;
};

std::string fmt_vector(const Vector &v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].to_string();
    return s + ")";
}

std::string fmt_dims(const Dims &d)
{
    return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
}

std::string fmt_matrix(const Matrix &m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i)
        s += (i ? " " : "") + fmt_vector(m.row(i));
    return s + "]";
}

void print_decomposition(std::ostream &os, const Decomposition &d)
{
    for (std::size_t i = 0; i < d.size(); ++i)
        os << "  " << i << ": " << fmt_vector(d[i].u) << " x " << fmt_vector(d[i].v) << " x "
           << fmt_vector(d[i].w) << "\n";
}

void emit(const TensorFile &t, const Options &o)
{
    Json j = tensor_to_json(t);
    if (o.out.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(o.out, j);
}

bool is_mu222(const Tensor3 &p)
{
    return p.dims() == Dims{4, 4, 4} && p == matmul_tensor(2, 2, 2, p.field());
}

int cmd_gen(const std::vector<std::string> &args, const Options &o)
{
    if (args.empty())
        throw CLI::ValidationError("gen", "missing kind");
    const std::string &kind = args[0];
    auto num = [&](std::size_t i) -> std::size_t {
        if (i >= args.size())
            throw CLI::ValidationError("gen", "missing argument " + std::to_string(i));
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(args[i], &pos);
            if (pos != args[i].size())
                throw std::invalid_argument(args[i]);
            return static_cast<std::size_t>(v);
        } catch (const std::logic_error &) {
            throw CLI::ValidationError("gen", "'" + args[i] + "' is not a nonnegative integer");
        }
    };
    auto arity = [&](std::size_t n) {
        if (args.size() != n + 1)
            throw CLI::ValidationError("gen", kind + " takes " + std::to_string(n) + " arguments");
    };
    Field f = parse_field(o.field);
    if (kind == "matmul") {
        arity(3);
        emit({matmul_tensor(num(1), num(2), num(3), f), std::nullopt}, o);
    } else if (kind == "random") {
        arity(3);
        emit({random_tensor(f, {num(1), num(2), num(3)}, o.seed), std::nullopt}, o);
    } else if (kind == "hook") {
        arity(4);
        emit({hook_tensor(f, num(1), num(2), num(3), num(4), o.slices, o.seed), std::nullopt}, o);
    } else if (kind == "dirsum") {
        arity(2);
        TensorFile a = tensor_from_json(read_json_file(args[1]));
        TensorFile b = tensor_from_json(read_json_file(args[2]));
        emit(dirsum_file(a.tensor, b.tensor), o);
    } else {
        throw CLI::ValidationError("gen", "unknown kind '" + kind + "'");
    }
    return kExitOk;
}

int cmd_rank(const std::string &path, const Options &o)
{
    TensorFile tf = tensor_from_json(read_json_file(path));
    const Tensor3 &p = tf.tensor;
    Dims fr = flattening_ranks(p);
    const std::size_t flat = std::max({fr[0], fr[1], fr[2]});
    UpperBound ub = upper_bound(p, tf.split);
    Json rep = {{"field", p.field().name()},
                {"dims", p.dims()},
                {"flattening_ranks", fr},
                {"upper_bound", ub.witness.size()},
                {"upper_source", ub.source}};
    std::ostringstream os;
    os << "field " << p.field().name() << ", dims " << fmt_dims(p.dims()) << "\n";
    os << "flattening ranks (" << fr[0] << "," << fr[1] << "," << fr[2] << ")\n";

    std::size_t lower = flat;
    std::optional<Decomposition> exact;
    if (p.field().is_prime()) {
        SubstitutionBound sb = substitution_lower_bound(p);
        rep["substitution"] = substitution_to_json(sb);
        os << "substitution bound " << sb.bound << (sb.budget_exhausted ? " (budget exhausted)" : "")
           << "\n";
        for (const auto &s : sb.trace)
            os << "  peel axis " << axis_name(s.axis) << " alpha " << fmt_vector(s.alpha) << " a "
               << fmt_vector(s.a) << " -> " << fmt_dims(s.residual_dims) << ", residual bound "
               << s.residual_bound << "\n";
        lower = std::max(lower, sb.bound);
        OracleResult r = rank_oracle(p, o.max_rank, o.budget);
        rep["oracle"] = oracle_to_json(r);
        if (r.exact()) {
            exact = r.witness;
            lower = r.rank;
        } else {
            lower = std::max(lower, r.rank);
            os << "oracle: " << status_name(r.status) << " after " << r.nodes << " nodes\n";
        }
    }
    if (!exact && lower == ub.witness.size())
        exact = ub.witness;
    if (exact) {
        rep["status"] = "exact";
        rep["rank"] = exact->size();
        rep["witness"] = decomposition_to_json(*exact);
        os << "rank " << exact->size() << " (exact)\n";
        print_decomposition(os, *exact);
    } else {
        rep["status"] = "bounds";
        rep["lower_bound"] = lower;
        rep["witness"] = decomposition_to_json(ub.witness);
        os << "upper bound " << ub.witness.size() << " (" << ub.source << " certified); lower bound "
           << lower << (lower == flat ? " (flattening)" : "") << "\n";
        if (is_mu222(p))
            os << "known value: 7 multiplications are necessary and sufficient for 2x2 matrices\n";
        print_decomposition(os, ub.witness);
    }
    std::cout << (o.json ? rep.dump(2) + "\n" : os.str());
    return exact ? kExitOk : kExitBoundOnly;
}

int additivity_over_q(const Tensor3 &p1, const Tensor3 &p2, const Options &o)
{
    TensorFile sum = dirsum_file(p1, p2);
    UpperBound u1 = upper_bound(p1), u2 = upper_bound(p2), us = upper_bound(sum.tensor, sum.split);
    auto lower = [](const Tensor3 &t) {
        Dims d = flattening_ranks(t);
        return std::max({d[0], d[1], d[2]});
    };
    Json rep = {{"field", "Q"},
                {"prime", {{"lower", lower(p1)}, {"upper", u1.witness.size()}}},
                {"bis", {{"lower", lower(p2)}, {"upper", u2.witness.size()}}},
                {"sum", {{"lower", lower(sum.tensor)}, {"upper", us.witness.size()}}},
                {"defect", nullptr}};
    std::ostringstream os;
    os << "p' rank in [" << lower(p1) << "," << u1.witness.size() << "]\n";
    os << "p'' rank in [" << lower(p2) << "," << u2.witness.size() << "]\n";
    os << "sum upper bound " << us.witness.size() << " (" << us.source << "); lower bound "
       << lower(sum.tensor) << "\n";
    os << "additivity not decidable at desk scale over Q\n";
    if (is_mu222(p1) && is_mu222(p2))
        os << "known value over C: R(mu222 + mu222) = 14\n";
    std::cout << (o.json ? rep.dump(2) + "\n" : os.str());
    return kExitBoundOnly;
}

int cmd_additivity(const std::string &path1, const std::string &path2, const Options &o)
{
    Tensor3 p1 = tensor_from_json(read_json_file(path1)).tensor;
    Tensor3 p2 = tensor_from_json(read_json_file(path2)).tensor;
    require_same_field(p1.field(), p2.field());
    if (!p1.field().is_prime())
        return additivity_over_q(p1, p2, o);

    AdditivityReport r = additivity_check(p1, p2, o.budget);
    Json rep = dossier_json(p1, p2, r);
    std::ostringstream os;
    auto line = [&](const char *name, const OracleResult &x) {
        os << name << " " << (x.exact() ? "" : ">= ") << x.rank << " (" << status_name(x.status)
           << ")\n";
    };
    line("R(p')", r.prime);
    line("R(p'')", r.bis);
    line("R(p'+p'')", r.sum);
    int code = kExitOk;
    if (!r.defect) {
        os << "defect indeterminate\n";
        code = kExitBoundOnly;
    } else {
        os << "defect " << *r.defect << "\n";
        const TypeCounts &c = r.classified->counts;
        auto d = r.classified->profile.dims();
        os << "(e',e'',f',f'') = (" << d[0] << "," << d[1] << "," << d[2] << "," << d[3] << ")\n";
        os << "prim " << c.prim << " bis " << c.bis << " hl " << c.hl << " hr " << c.hr << " vl "
           << c.vl << " vr " << c.vr << " mix " << c.mix << "\n";
        for (const auto &a : r.audit)
            os << "  [" << (a.holds ? "ok" : "FAIL") << "] " << a.name << ": " << a.lhs << " "
               << a.relation << " " << a.rhs << "\n";
        if (*r.defect != 0) {
            write_json_file(o.dossier, rep);
            os << (*r.defect > 0 ? "ADDITIVITY FAILS" : "SUBADDITIVITY VIOLATED (internal error)")
               << "; reverified " << (r.reverified ? "yes" : "no") << "; dossier " << o.dossier
               << "\n";
            code = *r.defect > 0 ? kExitPositiveDefect : kExitNegativeDefect;
        }
    }
    std::cout << (o.json ? rep.dump(2) + "\n" : os.str());
    return code;
}

int cmd_verify_strassen(const Options &o)
{
    Json rep = Json::array();
    bool all = true;
    for (const char *name : {"q", "gf2", "gf3", "gf5"}) {
        Field f = parse_field(name);
        Decomposition d = strassen_222(f);
        Tensor3 mu = matmul_tensor(2, 2, 2, f);
        bool ok = d.size() == 7 && evaluate(d) == mu;
        all = all && ok;
        rep.push_back({{"field", f.name()}, {"terms", d.size()}, {"certified", ok}});
        if (!o.json)
            std::cout << f.name() << ": " << (ok ? "pass" : "FAIL") << "\n";
    }
    if (o.json)
        std::cout << rep.dump(2) << "\n";
    return all ? kExitOk : 1;
}

int cmd_classify(const std::string &tpath, const std::string &dpath, const Options &o)
{
    TensorFile tf = tensor_from_json(read_json_file(tpath));
    if (!tf.split)
        throw PreconditionError("tensor file has no split");
    Decomposition d = decomposition_from_json(read_json_file(dpath));
    if (d.dims() != tf.tensor.dims() || !certifies(d, tf.tensor))
        throw PreconditionError("decomposition does not certify the tensor");
    ClassifiedDecomposition cd = classify(d, *tf.split);
    Json rep = classified_to_json(cd);
    std::ostringstream os;
    for (std::size_t i = 0; i < d.size(); ++i)
        os << "  " << i << ": " << type_name(cd.labels[i]) << "  " << fmt_vector(d[i].v) << " x "
           << fmt_vector(d[i].w) << "\n";
    auto pd = cd.profile.dims();
    os << "(e',e'',f',f'') = (" << pd[0] << "," << pd[1] << "," << pd[2] << "," << pd[3] << ")\n";
    const TypeCounts &c = cd.counts;
    os << "prim " << c.prim << " bis " << c.bis << " hl " << c.hl << " hr " << c.hr << " vl " << c.vl
       << " vr " << c.vr << " mix " << c.mix << "\n";
    if (!o.ranks.empty()) {
        if (o.ranks.size() != 3)
            throw CLI::ValidationError("--ranks", "expects R(p') R(p'') R(p)");
        auto [p1, p2] = split_direct_sum(tf.tensor, *tf.split);
        auto audit = audit_inequalities(cd, o.ranks[0], o.ranks[1], o.ranks[2],
                                        flattening_ranks(p1)[0], flattening_ranks(p2)[0]);
        rep["audit"] = audit_to_json(audit);
        for (const auto &a : audit)
            os << "  [" << (a.holds ? "ok" : "FAIL") << "] " << a.name << ": " << a.lhs << " "
               << a.relation << " " << a.rhs << "\n";
    }
    std::cout << (o.json ? rep.dump(2) + "\n" : os.str());
    return kExitOk;
}

std::optional<HookShape> smallest_hook(const MatrixSpace &w)
{
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (std::size_t e = 0; e <= 3; ++e)
        for (std::size_t f = 0; f <= 3; ++f)
            if (e <= w.rows() && f <= w.cols())
                shapes.emplace_back(e, f);
    std::stable_sort(shapes.begin(), shapes.end(), [](auto x, auto y) {
        return std::make_tuple(x.first + x.second, std::max(x.first, x.second)) <
               std::make_tuple(y.first + y.second, std::max(y.first, y.second));
    });
    for (auto [e, f] : shapes) {
        try {
            if (auto h = find_hook_shape(w, e, f))
                return h;
        } catch (const DimensionError &) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// First functional on `axis` killing `side` whose slice has rank one.
std::optional<Vector> annihilating_rank_one(const Tensor3 &p, Axis axis,
                                            const std::vector<Vector> &side)
{
    for (const auto &alpha : ProjectivePoints(p.field(), p.dim(axis))) {
        bool kills = std::all_of(side.begin(), side.end(),
                                 [&](const Vector &h) { return dot(alpha, h).is_zero(); });
        if (kills && matrix_rank(p.contract(axis, alpha)) == 1)
            return alpha;
    }
    return std::nullopt;
}

int cmd_peel(const std::string &path, const Options &o)
{
    TensorFile tf = tensor_from_json(read_json_file(path));
    Tensor3 p = tf.tensor;
    if (!p.field().is_prime())
        throw UnsupportedField("peel needs a finite field");
    std::vector<Axis> axes = {Axis::A, Axis::B, Axis::C};
    if (!o.axis.empty()) {
        if (o.axis.size() != 1)
            throw CLI::ValidationError("--axis", "expects A, B or C");
        axes = {parse_axis(o.axis[0])};
    }
    std::optional<HookShape> hook = smallest_hook(slice_space(p, Axis::A));
    Json rep = {{"steps", Json::array()}};
    std::ostringstream os;
    if (hook)
        os << "slice space is (" << hook->e << "," << hook->f << ")-hook shaped\n";
    std::size_t peels = 0;
    while (true) {
        std::optional<std::pair<Axis, Vector>> found;
        for (Axis a : axes) {
            if (hook && a != Axis::A) {
                if (auto alpha = annihilating_rank_one(p, a, a == Axis::B ? hook->rows : hook->cols)) {
                    found.emplace(a, *alpha);
                    break;
                }
            }
            SliceSearch s = find_rank_one_slice(p, a);
            if (s.alpha) {
                found.emplace(a, *s.alpha);
                break;
            }
        }
        if (!found) {
            os << (peels == 0 ? "no rank-one slice on any axis\n" : "no further rank-one slice\n");
            break;
        }
        auto [axis, alpha] = *found;
        PeelCertificate cert = peel(p, axis, alpha, canonical_a(alpha));
        Json step = {{"axis", axis_name(axis)},
                     {"alpha", vector_to_json(alpha)},
                     {"a", vector_to_json(cert.chosen_a)},
                     {"slice", vector_to_json(cert.slice.vectorized())},
                     {"residual_dims", cert.residual.dims()}};
        os << "peel " << ++peels << ": axis " << axis_name(axis) << " alpha " << fmt_vector(alpha)
           << " slice " << fmt_matrix(cert.slice) << " -> " << fmt_dims(cert.residual.dims()) << "\n";
        if (hook) {
            // B- and C-peels keep the hook when α kills its rows or columns.
            std::vector<Vector> *side = axis == Axis::B ? &hook->rows
                                        : axis == Axis::C ? &hook->cols
                                                          : nullptr;
            bool kills = !side || std::all_of(side->begin(), side->end(), [&](const Vector &h) {
                return dot(alpha, h).is_zero();
            });
            if (kills && side) {
                std::size_t q = 0;
                while (alpha[q].is_zero())
                    ++q;
                for (auto &h : *side)
                    h.erase(h.begin() + static_cast<std::ptrdiff_t>(q));
            }
            if (kills) {
                bool kept = is_hook_shaped(slice_space(cert.residual, Axis::A), *hook);
                step["hook_preserved"] = kept;
                os << "  hook (" << hook->e << "," << hook->f << ") "
                   << (kept ? "preserved" : "LOST") << "\n";
            } else {
                os << "  hook no longer tracked\n";
                hook.reset();
            }
        }
        rep["steps"].push_back(step);
        p = cert.residual;
        if (!o.all)
            break;
    }
    Dims fr = flattening_ranks(p);
    SubstitutionBound sb = substitution_lower_bound(tf.tensor, o.budget);
    rep["final_flattening_ranks"] = fr;
    rep["lower_bound"] = sb.bound;
    rep["substitution"] = substitution_to_json(sb);
    os << "final residual flattening ranks (" << fr[0] << "," << fr[1] << "," << fr[2] << ")\n";
    os << "lower bound " << sb.bound
       << (sb.trace.empty() ? " (flattening)" : " (substitution, minimum over every a)") << "\n";
    std::cout << (o.json ? rep.dump(2) + "\n" : os.str());
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact tensor rank and direct-sum additivity toolkit"};
    app.require_subcommand(1);
    Options o;
    o.budget = kDefaultBudget;

    auto add_common = [&](CLI::App *c) {
        c->add_option("--field", o.field, "gf<p> or q")
            ->capture_default_str()
            ->check(CLI::Validator(
                [](std::string &v) {
                    try {
                        parse_field(v);
                    } catch (const std::invalid_argument &e) {
                        return std::string(e.what());
                    }
                    return std::string();
                },
                "FIELD"));
        c->add_option("--seed", o.seed, "generator seed")->capture_default_str();
        c->add_option("--budget", o.budget, "search node budget")->capture_default_str();
        c->add_option("--max-rank", o.max_rank, "largest rank tried")->capture_default_str();
        c->add_flag("--json", o.json, "machine-readable report");
    };

    std::vector<std::string> gen_args;
    auto *gen = app.add_subcommand("gen", "generate a tensor file");
    gen->add_option("args", gen_args, "matmul i j k | random a b c | hook b c e f | dirsum f1 f2")
        ->required();
    gen->add_option("-o,--out", o.out, "output path (default stdout)");
    gen->add_option("--slices", o.slices, "number of slices for hook")->capture_default_str();
    add_common(gen);

    std::string file1, file2;
    auto *rank = app.add_subcommand("rank", "rank bounds and exact rank");
    rank->add_option("file", file1)->required();
    add_common(rank);

    auto *add = app.add_subcommand("additivity", "rank additivity of a direct sum");
    add->add_option("file1", file1)->required();
    add->add_option("file2", file2)->required();
    add->add_option("--dossier", o.dossier, "where a nonzero-defect dossier is written");
    add_common(add);

    auto *vs = app.add_subcommand("verify-strassen", "certify the seven-term table");
    vs->add_flag("--json", o.json);

    auto *cls = app.add_subcommand("classify", "label the terms of a decomposition");
    cls->add_option("file", file1, "tensor file with split")->required();
    cls->add_option("decomposition", file2)->required();
    cls->add_option("--ranks", o.ranks, "R(p') R(p'') R(p) for the audit")->expected(3);
    add_common(cls);

    auto *pl = app.add_subcommand("peel", "substitution peels");
    pl->add_option("file", file1)->required();
    pl->add_option("--axis", o.axis, "A, B or C");
    pl->add_flag("--all", o.all, "peel until no rank-one slice remains");
    add_common(pl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen)
            return cmd_gen(gen_args, o);
        if (*rank)
            return cmd_rank(file1, o);
        if (*add)
            return cmd_additivity(file1, file2, o);
        if (*vs)
            return cmd_verify_strassen(o);
        if (*cls)
            return cmd_classify(file1, file2, o);
        if (*pl)
            return cmd_peel(file1, o);
    } catch (const CLI::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Json::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
