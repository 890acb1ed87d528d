#include "qpoly/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qpoly {

json state_to_json(const DensityMatrix& rho) {
  const int n = rho.total();
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < n; ++i) {
    json rrow = json::array();
    json irow = json::array();
    for (int j = 0; j < n; ++j) {
      rrow.push_back(rho.matrix()(i, j).real());
      irow.push_back(rho.matrix()(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"dims", rho.dims().dims()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix state_from_json(const json& j) {
  if (!j.contains("dims") || !j.contains("re") || !j.contains("im")) {
    throw std::invalid_argument("state record: needs dims, re and im fields");
  }
  const DimVector dims(j.at("dims").get<std::vector<int>>());
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const int n = dims.total();
  if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n) {
    throw std::invalid_argument("state record: matrix size does not match dims");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[static_cast<std::size_t>(i)].size()) != n ||
        static_cast<int>(im[static_cast<std::size_t>(i)].size()) != n) {
      throw std::invalid_argument("state record: matrix rows must have total_dim entries");
    }
    for (int jj = 0; jj < n; ++jj) {
      m(i, jj) = cxd(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)].get<double>(),
                     im[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)].get<double>());
    }
  }
  return DensityMatrix::checked(std::move(m), dims);
}

json ccq_to_json(const CcqState& ccq) {
  json blocks = json::array();
  for (int x = 0; x < ccq.d(); ++x) {
    for (int y = 0; y < ccq.d(); ++y) {
      blocks.push_back(json{
          {"x", x},
          {"y", y},
          {"block",
           state_to_json(DensityMatrix::unchecked(ccq.block(x, y), ccq.ab_dims()))}});
    }
  }
  return json{{"d", ccq.d()},
              {"form", ccq.form() == CcqState::Form::paper ? "paper" : "general"},
              {"blocks", std::move(blocks)}};
}

CcqState ccq_from_json(const json& j) {
  const int d = j.at("d").get<int>();
  const std::string form = j.at("form").get<std::string>();
  std::vector<Matrix> blocks(static_cast<std::size_t>(d * d));
  for (const auto& entry : j.at("blocks")) {
    const int x = entry.at("x").get<int>();
    const int y = entry.at("y").get<int>();
    if (x < 0 || x >= d || y < 0 || y >= d) {
      throw std::invalid_argument("ccq record: block index out of range");
    }
    blocks[static_cast<std::size_t>(x * d + y)] =
        state_from_json(entry.at("block")).matrix();
  }
  const DimVector ab({d, d});
  return form == "paper" ? CcqState::paper_form(d, ab, std::move(blocks))
                         : CcqState::general_form(d, ab, std::move(blocks));
}

PureState pure_from_density(const DensityMatrix& rho) {
  const EigenDecomposition eig = eigendecompose(rho);
  if (eig.eigenvalues.front() < 1.0 - 1e-8) {
    throw std::invalid_argument("state file: expected a pure state (rank-one density)");
  }
  Vector v = eig.eigenvectors.col(0);
  v /= v.norm();
  return PureState::unchecked(std::move(v), rho.dims());
}

DensityMatrix load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open state file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("state file " + path + ": " + e.what());
  }
  return state_from_json(j);
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open output file: " + tmp);
    }
    out << bytes;
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + tmp + " -> " + path);
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace qpoly
