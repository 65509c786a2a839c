#include "trank/io.hpp"

#include "trank/error.hpp"

#include <fstream>

namespace trank {

Scalar Lcg::scalar(const Field &f)
{
    std::uint64_t x = next();
    if (f.is_prime())
        return Scalar::from_residue(f, static_cast<std::uint32_t>(x % f.modulus()));
    return Scalar(f, static_cast<long long>(x % 7) - 3);
}

Json field_to_json(const Field &f)
{
    if (f.is_prime())
        return {{"kind", "gf"}, {"p", f.modulus()}};
    return {{"kind", "q"}};
}

Field field_from_json(const Json &j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gf")
        return Field::prime(j.at("p").get<std::uint32_t>());
    if (kind == "q")
        return Field::rationals();
    throw PreconditionError("unknown field kind '" + kind + "'");
}

Json scalar_to_json(const Scalar &s)
{
    if (s.field().is_prime())
        return s.residue();
    const mpq_class &q = s.rational();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Scalar scalar_from_json(const Field &f, const Json &j)
{
    if (f.is_prime()) {
        if (!j.is_number_integer())
            throw PreconditionError("finite-field entries must be integers");
        long long x = j.get<long long>();
        if (x < 0 || x >= static_cast<long long>(f.modulus()))
            throw PreconditionError("entry " + std::to_string(x) + " outside [0,p)");
        return Scalar(f, x);
    }
    if (j.is_number_integer())
        return Scalar(f, j.get<long long>());
    if (!j.is_string())
        throw PreconditionError("rational entries must be strings");
    return Scalar::parse(f, j.get<std::string>());
}

Json vector_to_json(const Vector &v)
{
    Json out = Json::array();
    for (const auto &x : v)
        out.push_back(scalar_to_json(x));
    return out;
}

Vector vector_from_json(const Field &f, const Json &j)
{
    Vector v;
    for (const auto &x : j)
        v.push_back(scalar_from_json(f, x));
    return v;
}

namespace {

Dims dims_from_json(const Json &j)
{
    if (!j.is_array() || j.size() != 3)
        throw DimensionError("dims must be [a,b,c]");
    return {j[0].get<std::size_t>(), j[1].get<std::size_t>(), j[2].get<std::size_t>()};
}

} // namespace

Json tensor_to_json(const TensorFile &t)
{
    const Dims &d = t.tensor.dims();
    Json out = {{"field", field_to_json(t.tensor.field())},
                {"dims", {d[0], d[1], d[2]}},
                {"entries", vector_to_json(t.tensor.entries())}};
    if (t.split)
        out["split"] = {{"aP", t.split->a1}, {"bP", t.split->b1}, {"cP", t.split->c1}};
    return out;
}

TensorFile tensor_from_json(const Json &j)
{
    Field f = field_from_json(j.at("field"));
    Dims d = dims_from_json(j.at("dims"));
    const Json &e = j.at("entries");
    if (!e.is_array() || e.size() != d[0] * d[1] * d[2])
        throw DimensionError("entries length does not match dims");
    TensorFile out{Tensor3(f, d, vector_from_json(f, e)), std::nullopt};
    if (j.contains("split")) {
        const Json &s = j["split"];
        BlockSplit sp;
        sp.a1 = s.at("aP").get<std::size_t>();
        sp.b1 = s.at("bP").get<std::size_t>();
        sp.c1 = s.at("cP").get<std::size_t>();
        if (sp.a1 > d[0] || sp.b1 > d[1] || sp.c1 > d[2])
            throw DimensionError("split exceeds dims");
        sp.a2 = d[0] - sp.a1;
        sp.b2 = d[1] - sp.b1;
        sp.c2 = d[2] - sp.c1;
        out.split = sp;
    }
    return out;
}

Json decomposition_to_json(const Decomposition &d)
{
    const Dims &dims = d.dims();
    Json terms = Json::array();
    for (const auto &t : d.terms())
        terms.push_back({{"u", vector_to_json(t.u)}, {"v", vector_to_json(t.v)},
                         {"w", vector_to_json(t.w)}});
    return {{"field", field_to_json(d.field())},
            {"dims", {dims[0], dims[1], dims[2]}},
            {"terms", terms}};
}

Decomposition decomposition_from_json(const Json &j)
{
    Field f = field_from_json(j.at("field"));
    Decomposition d(f, dims_from_json(j.at("dims")));
    for (const auto &t : j.at("terms"))
        d.push_back(RankOneTerm(vector_from_json(f, t.at("u")), vector_from_json(f, t.at("v")),
                                vector_from_json(f, t.at("w"))));
    return d;
}

Json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw PreconditionError(path + ": " + e.what());
    }
}

void write_json_file(const std::string &path, const Json &j)
{
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot write " + path);
    out << j.dump(2) << "\n";
}

Tensor3 random_tensor(const Field &f, const Dims &dims, std::uint64_t seed)
{
    Lcg rng(seed);
    Tensor3 t(f, dims);
    for (std::size_t i = 0; i < dims[0]; ++i)
        for (std::size_t j = 0; j < dims[1]; ++j)
            for (std::size_t k = 0; k < dims[2]; ++k)
                t(i, j, k) = rng.scalar(f);
    return t;
}

Tensor3 hook_tensor(const Field &f, std::size_t b, std::size_t c, std::size_t e, std::size_t fcols,
                    std::size_t slices, std::uint64_t seed)
{
    if (e > b || fcols > c)
        throw DimensionError("hook larger than the matrix shape");
    Lcg rng(seed);
    Tensor3 t(f, {slices, b, c});
    for (std::size_t i = 0; i < slices; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < c; ++k)
                if (j < e || k < fcols)
                    t(i, j, k) = rng.scalar(f);
    return t;
}

TensorFile dirsum_file(const Tensor3 &p1, const Tensor3 &p2)
{
    return {direct_sum(p1, p2), BlockSplit::of(p1, p2)};
}

Json oracle_to_json(const OracleResult &r)
{
    Json out = {{"status", status_name(r.status)}, {"rank", r.rank}, {"nodes", r.nodes}};
    if (r.witness)
        out["witness"] = decomposition_to_json(*r.witness);
    return out;
}

Json profile_to_json(const StickOutProfile &p)
{
    auto basis = [](const std::vector<Vector> &b) {
        Json out = Json::array();
        for (const auto &v : b)
            out.push_back(vector_to_json(v));
        return out;
    };
    auto d = p.dims();
    return {{"dims", {d[0], d[1], d[2], d[3]}},
            {"Eprime", basis(p.e1)},
            {"Ebis", basis(p.e2)},
            {"Fprime", basis(p.f1)},
            {"Fbis", basis(p.f2)}};
}

Json counts_to_json(const TypeCounts &c)
{
    return {{"prim", c.prim}, {"bis", c.bis}, {"hl", c.hl}, {"hr", c.hr},
            {"vl", c.vl},     {"vr", c.vr},   {"mix", c.mix}};
}

Json classified_to_json(const ClassifiedDecomposition &cd)
{
    Json labels = Json::array();
    for (auto l : cd.labels)
        labels.push_back(type_name(l));
    return {{"labels", labels},
            {"profile", profile_to_json(cd.profile)},
            {"counts", counts_to_json(cd.counts)}};
}

Json audit_to_json(const std::vector<AuditItem> &items)
{
    Json out = Json::array();
    for (const auto &a : items)
        out.push_back({{"name", a.name},
                       {"lhs", a.lhs},
                       {"relation", a.relation},
                       {"rhs", a.rhs},
                       {"holds", a.holds}});
    return out;
}

Json substitution_to_json(const SubstitutionBound &b)
{
    Json trace = Json::array();
    for (const auto &s : b.trace)
        trace.push_back({{"axis", axis_name(s.axis)},
                         {"alpha", vector_to_json(s.alpha)},
                         {"a", vector_to_json(s.a)},
                         {"residual_dims", s.residual_dims},
                         {"residual_bound", s.residual_bound}});
    return {{"bound", b.bound},
            {"flattening", b.flattening},
            {"final_flattening", b.final_flattening},
            {"budget_exhausted", b.budget_exhausted},
            {"nodes", b.nodes},
            {"trace", trace}};
}

Json dossier_json(const Tensor3 &p1, const Tensor3 &p2, const AdditivityReport &rep)
{
    Json out = {{"field", field_to_json(p1.field())},
                {"prime", tensor_to_json({p1, std::nullopt})},
                {"bis", tensor_to_json({p2, std::nullopt})},
                {"rank_prime", oracle_to_json(rep.prime)},
                {"rank_bis", oracle_to_json(rep.bis)},
                {"rank_sum", oracle_to_json(rep.sum)},
                {"reverified", rep.reverified},
                {"audit", audit_to_json(rep.audit)}};
    out["defect"] = rep.defect ? Json(*rep.defect) : Json(nullptr);
    if (rep.classified)
        out["classification"] = classified_to_json(*rep.classified);
    return out;
}

} // namespace trank
