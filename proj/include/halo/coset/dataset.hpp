#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "halo/padic/padic_element.hpp"

namespace halo::coset {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// [[a, b], [c, d]], entries in Z_p stored in [0, p^precision)
struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    bool operator==(const Mat2&) const = default;
};

struct CosetItem {
    int index = 0;
    std::vector<int> sigma;  // sigma[i] = source class of class i
    std::vector<Mat2> mats;  // one per place above p; place 0 is the varying place
};

enum class DatumKind { U, Away };

struct HeckeDatum {
    std::string name;
    DatumKind kind = DatumKind::U;
    int place = 0;  // place of the U-operator
    std::vector<CosetItem> items;
};

struct CosetDataset {
    int p = 3;
    int d = 1;
    int t = 1;
    int w = 0;
    std::vector<int> k_list;  // weights at places 1..d-1
    int precision = 20;
    bool synthetic = false;
    std::uint64_t seed = 0;
    std::vector<HeckeDatum> data;

    const HeckeDatum* find(std::string_view name) const;
    // the U-operator at the varying place
    const HeckeDatum& u_v() const;
    // prod (k - 1) over the fixed places
    int alg_dim() const;
    int t_prime() const { return t * alg_dim(); }
};

struct Check {
    std::string datum;
    int item = -1;  // -1 for dataset-level checks
    std::string condition;
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool ok() const;
    std::vector<Check> failures() const;
    std::string str() const;
};

// Z_p entries of a stored matrix, at the dataset precision
struct PadicMat2 {
    padic::PadicElement a, b, c, d;
    padic::PadicElement det() const { return a * d - b * c; }
};
PadicMat2 to_padic(const Mat2& m, int p, int precision);

int valuation_capped(std::int64_t x, int p, int cap);

ValidationReport validate_dataset(const CosetDataset& ds);
// syntax only; no membership checks
CosetDataset parse_dataset_unchecked(std::string_view text);
// syntax and membership; throws DatasetError naming the first failed condition
CosetDataset parse_dataset(std::string_view text);
std::string serialize_dataset(const CosetDataset& ds);
CosetDataset read_dataset_file(const std::string& path, bool validate = true);

struct SyntheticParams {
    int p = 3;
    int d = 1;
    int t = 1;
    int w = 0;
    std::vector<int> k_list;
    int n_data = 0;           // number of away-from-p operators
    bool perturb = true;      // false gives the standard coset representatives
    bool u_prime = true;      // also emit U-operators at the fixed places
    int precision = 20;
};

CosetDataset gen_synthetic(std::uint64_t seed, const SyntheticParams& params);

// FNV-1a 64-bit, printed in output headers
std::uint64_t content_hash(std::string_view bytes);
std::string hex64(std::uint64_t h);

}  // namespace halo::coset
