#include "qsec/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace qsec {

using nlohmann::json;

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json matrix_to_json(const Mat& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(round12(m(i, j).real()));
      irow.push_back(round12(m(i, j).imag()));
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Mat matrix_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  Mat m(dim, dim);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      m(i, k) = cxd(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
  return m;
}

json pauli_index_to_json(const PauliIndex& idx, int p, int m) {
  return json{{"p", p}, {"m", m}, {"alpha", idx.alpha}, {"beta", idx.beta}, {"phase", idx.phase_exp}};
}

PauliIndex pauli_index_from_json(const json& j) {
  PauliIndex idx;
  idx.alpha = j.at("alpha").get<FpVec>();
  idx.beta = j.at("beta").get<FpVec>();
  idx.phase_exp = j.value("phase", 0);
  return idx;
}

json fpmat_to_json(const FpMat& a) {
  json rows = json::array();
  for (const auto& r : a) rows.push_back(r);
  return rows;
}

FpMat fpmat_from_json(const json& j) {
  FpMat a;
  for (const auto& row : j) a.push_back(row.get<FpVec>());
  return a;
}

json mub_family_to_json(const MubFamily& f) {
  json bases = json::array();
  for (const Basis& b : f.bases) {
    json vecs = json::array();
    for (const Vec& v : b.vectors) {
      json amps = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i)
        amps.push_back(json{{"re", round12(v(i).real())}, {"im", round12(v(i).imag())}});
      vecs.push_back(std::move(amps));
    }
    bases.push_back(std::move(vecs));
  }
  return json{{"d", f.dim}, {"bases", std::move(bases)}};
}

MubFamily mub_family_from_json(const json& j) {
  MubFamily f;
  f.dim = j.at("d").get<int>();
  for (const auto& bj : j.at("bases")) {
    Basis b;
    b.dim = f.dim;
    for (const auto& vj : bj) {
      Vec v(f.dim);
      for (int i = 0; i < f.dim; ++i)
        v(i) = cxd(vj.at(i).at("re").get<double>(), vj.at(i).at("im").get<double>());
      b.vectors.push_back(std::move(v));
    }
    f.bases.push_back(std::move(b));
  }
  return f;
}

std::string mub_family_to_text(const MubFamily& f) {
  std::ostringstream os;
  for (size_t bi = 0; bi < f.bases.size(); ++bi) {
    os << "B" << bi << " =\n";
    for (const Vec& v : f.bases[bi].vectors) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "(%+.6f%+.6fi) ", v(i).real(), v(i).imag());
        os << buf;
      }
      os << "\n";
    }
    os << "\n";
  }
  return os.str();
}

json code_to_json(const BinaryLinearCode& c) {
  json rows = json::array();
  for (word_t g : c.generator) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%" PRIx64, static_cast<std::uint64_t>(g));
    rows.push_back(std::string(buf));
  }
  return json{{"n", c.n}, {"k", c.k}, {"generator_rows_hex", std::move(rows)}};
}

BinaryLinearCode code_from_json(const json& j) {
  BinaryLinearCode c;
  c.n = j.at("n").get<int>();
  c.k = j.at("k").get<int>();
  for (const auto& row : j.at("generator_rows_hex"))
    c.generator.push_back(std::strtoull(row.get<std::string>().c_str(), nullptr, 16));
  c.parity_check = gf2::null_space(c.generator, c.n);
  c.validate();
  return c;
}

json encryption_set_to_json(const EncryptionSet& s) {
  json items = json::array();
  const bool with_labels = !s.labels().empty();
  for (size_t k = 0; k < s.items().size(); ++k) {
    json item{{"p", round12(s.items()[k].first)}};
    if (with_labels)
      item["label"] = json{{"alpha", s.labels()[k].alpha}, {"beta", s.labels()[k].beta}};
    else
      item["matrix"] = matrix_to_json(s.items()[k].second);
    items.push_back(std::move(item));
  }
  return json{{"n", s.n()}, {"items", std::move(items)}};
}

EncryptionSet encryption_set_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<std::pair<double, Mat>> items;
  std::vector<PauliLabel> labels;
  bool any_label = false, any_matrix = false;
  for (const auto& item : j.at("items")) {
    const double p = item.at("p").get<double>();
    if (item.contains("label")) {
      any_label = true;
      const unsigned a = item.at("label").at("alpha").get<unsigned>();
      const unsigned b = item.at("label").at("beta").get<unsigned>();
      items.emplace_back(p, pauli_xz(n, a, b));
      labels.push_back({a, b});
    } else {
      any_matrix = true;
      items.emplace_back(p, matrix_from_json(item.at("matrix")));
    }
  }
  if (any_label && any_matrix)
    throw std::invalid_argument("encryption set: mixing labels and matrices unsupported");
  return EncryptionSet(n, std::move(items), any_label ? std::move(labels) : std::vector<PauliLabel>{});
}

json bound_report(const std::string& name, double value, double oracle_value) {
  return json{{"bound_name", name},
              {"value", round12(value)},
              {"oracle_value", round12(oracle_value)},
              {"margin", round12(value - oracle_value)}};
}

std::string params_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

}  // namespace qsec
