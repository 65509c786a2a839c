#include <doctest.h>

#include <cstdio>

#include "oracles.hpp"
#include "trank/error.hpp"
#include "trank/io.hpp"

using namespace trank;

namespace {

const Field gf2 = Field::prime(2);
const Field qq = Field::rationals();

} // namespace

TEST_CASE("LCG stream")
{
    // Reference values computed with plain 64-bit modular arithmetic.
    Lcg rng(1);
    CHECK(rng.next() == 908834774u);
    CHECK(rng.next() == 1093944153u);
    CHECK(rng.next() == 1392341196u);
    CHECK(rng.next() == 822192870u);

    Lcg a(1), b(1);
    CHECK(a.scalar(gf2).residue() == 0);
    CHECK(a.scalar(gf2).residue() == 1);
    CHECK(b.scalar(qq).to_string() == "-2");
    CHECK(random_tensor(gf2, {2, 3, 2}, 9) == random_tensor(gf2, {2, 3, 2}, 9));
    CHECK_FALSE(random_tensor(gf2, {2, 3, 2}, 9) == random_tensor(gf2, {2, 3, 2}, 10));
}

TEST_CASE("tensor files round-trip")
{
    std::mt19937_64 rng(81);
    for (Field f : {gf2, Field::prime(65521), qq}) {
        Tensor3 t = oracle::random_tensor(f, {2, 3, 1}, rng);
        TensorFile back = tensor_from_json(Json::parse(tensor_to_json({t, std::nullopt}).dump()));
        CHECK(back.tensor == t);
        CHECK_FALSE(back.split);
    }
    Tensor3 q = Tensor3::from_ints(qq, {1, 1, 2}, {0, 0});
    q(0, 0, 0) = Scalar(qq, mpq_class(-6, 4));
    Json j = tensor_to_json({q, std::nullopt});
    CHECK(j["entries"][0] == "-3/2");
    CHECK(j["entries"][1] == "0/1");

    std::string path = "test_io_roundtrip.json";
    write_json_file(path, j);
    CHECK(tensor_from_json(read_json_file(path)).tensor == q);
    std::remove(path.c_str());
}

TEST_CASE("malformed tensor files")
{
    Json good = tensor_to_json({oracle::diagonal(gf2, 2), std::nullopt});
    Json j = good;
    j["entries"][0] = 2;
    CHECK_THROWS_AS(tensor_from_json(j), PreconditionError);
    j = good;
    j["entries"].erase(0);
    CHECK_THROWS_AS(tensor_from_json(j), DimensionError);
    j = good;
    j["field"] = {{"kind", "r"}};
    CHECK_THROWS_AS(tensor_from_json(j), PreconditionError);
    j = good;
    j["split"] = {{"aP", 3}, {"bP", 1}, {"cP", 1}};
    CHECK_THROWS_AS(tensor_from_json(j), DimensionError);

    Json q = tensor_to_json({oracle::diagonal(qq, 1), std::nullopt});
    q["entries"][0] = "1/0";
    CHECK_THROWS(tensor_from_json(q));
    CHECK_THROWS_AS(read_json_file("no/such/file.json"), PreconditionError);
}

TEST_CASE("decomposition files round-trip")
{
    Decomposition s = strassen_222(qq);
    Decomposition back = decomposition_from_json(Json::parse(decomposition_to_json(s).dump()));
    CHECK(back.size() == 7);
    CHECK(certifies(back, matmul_tensor(2, 2, 2, qq)));
}

TEST_CASE("generators")
{
    Tensor3 h = hook_tensor(gf2, 4, 4, 1, 2, 3, 7);
    CHECK(h.dims() == Dims{3, 4, 4});
    CHECK(is_hook_shaped(slice_space(h, Axis::A), coordinate_hook(gf2, 4, 4, 1, 2)));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 1; j < 4; ++j)
            for (std::size_t k = 2; k < 4; ++k)
                CHECK(h(i, j, k).is_zero());
    CHECK_THROWS_AS(hook_tensor(gf2, 2, 2, 3, 1, 1, 1), DimensionError);

    Tensor3 a = random_tensor(gf2, {1, 2, 2}, 3), b = random_tensor(gf2, {2, 1, 2}, 4);
    TensorFile ds = dirsum_file(a, b);
    CHECK(ds.tensor.dims() == Dims{3, 3, 4});
    REQUIRE(ds.split);
    Json j = tensor_to_json(ds);
    CHECK(j["split"]["aP"] == 1);
    CHECK(j["split"]["bP"] == 2);
    CHECK(j["split"]["cP"] == 2);
    TensorFile back = tensor_from_json(j);
    REQUIRE(back.split);
    CHECK(back.split->c2 == 2);
    auto [p1, p2] = split_direct_sum(back.tensor, *back.split);
    CHECK(p1 == a);
    CHECK(p2 == b);
}

TEST_CASE("dossier holds everything needed to recheck")
{
    Tensor3 p = oracle::diagonal(gf2, 2);
    AdditivityReport rep = additivity_check(p, p);
    Json d = Json::parse(dossier_json(p, p, rep).dump());
    CHECK(d["defect"] == 0);
    CHECK(tensor_from_json(d["prime"]).tensor == p);
    Decomposition w = decomposition_from_json(d["rank_sum"]["witness"]);
    CHECK(certifies(w, direct_sum(p, p)));
    CHECK(d["classification"]["labels"].size() == 4);
    CHECK(d["audit"].is_array());
}
