#pragma once

// Text and JSON front ends for the command-line inputs.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/algsem.hpp"
#include "gplab/brackets.hpp"
#include "gplab/linalg/matrix.hpp"
#include "gplab/numbers.hpp"
#include "gplab/polynomial.hpp"

namespace gplab::cli {

std::string trim(std::string_view s);

/// Splits on `sep` outside (), [] and {}.
std::vector<std::string> split_top(std::string_view s, char sep);

std::vector<ExactScalar> parse_scalar_list(std::string_view s);
std::vector<long> parse_long_list(std::string_view s);

/// "1:1,2:1,3:2".
Grading parse_grading(std::string_view s);

/// "running", or a comma-separated list of bracket indices closed under
/// derivability. Leaves missing from `grading` get degree 1.
IndexSet parse_index_set(std::string_view spec, std::string_view grading);

/// "1=sqrt(2),3=1/7", or a plain list assigned to the leaves in increasing order.
std::map<unsigned, ExactScalar> parse_alpha(std::string_view spec, const IndexSet& d);

/// Polynomial in x_1..x_dim; in one dimension `x` stands for x_1. Extra
/// named variables follow the coordinates.
Polynomial parse_poly(std::string_view text, std::size_t dim, const std::vector<std::string>& extra = {});

/// JSON ({"dim", "pieces": [{"F": [...], "G": [...]}]}) or the relation DSL:
/// pieces joined by `|`, constraints joined by `&` or `,`, each a chain of
/// polynomials separated by `<`, `>` or `=`. `all` and `empty` are accepted.
SemialgebraicSet parse_set(std::string_view spec, std::size_t dim);

/// JSON array of rows or "a,b;c,d".
Matrix<ExactScalar> parse_matrix(std::string_view spec);
std::vector<std::vector<ExactScalar>> parse_points(std::string_view spec);

nlohmann::json matrix_json(const Matrix<ExactScalar>& m);
nlohmann::json scalar_list_json(const std::vector<ExactScalar>& v);

}  // namespace gplab::cli
