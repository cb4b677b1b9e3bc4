#include "framekit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace framekit {

using nlohmann::json;

std::string formatG17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json loadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void storeJson(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(1) << '\n';
}

json labelToJson(const Label& l) {
  if (l.arity == 1) return json::array({l.a});
  return json::array({l.a, l.b});
}

Label labelFromJson(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    throw InputError("label must be [a] or [a,b]");
  for (const auto& c : j)
    if (!c.is_number_integer()) throw InputError("label coordinates must be integers");
  if (j.size() == 1) return Label(j[0].get<Index>());
  return Label(j[0].get<Index>(), j[1].get<Index>());
}

json complexMatrixToJson(const ComplexMatrix& m, bool column_major) {
  // column_major: one inner list per column (frame vectors); otherwise rows.
  json out = json::array();
  Index outer = column_major ? m.cols() : m.rows();
  Index inner = column_major ? m.rows() : m.cols();
  for (Index i = 0; i < outer; ++i) {
    json entry = json::array();
    for (Index j = 0; j < inner; ++j) {
      Complex z = column_major ? m(j, i) : m(i, j);
      entry.push_back(json::array({z.real(), z.imag()}));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

ComplexMatrix complexMatrixFromJson(const json& j, Index inner_expected, bool column_major,
                                    const std::string& what) {
  if (!j.is_array() || j.empty()) throw InputError(what + " must be a nonempty array");
  Index outer = static_cast<Index>(j.size());
  ComplexMatrix m(column_major ? inner_expected : outer,
                  column_major ? outer : inner_expected);
  for (Index i = 0; i < outer; ++i) {
    const json& entry = j[static_cast<size_t>(i)];
    if (!entry.is_array() || static_cast<Index>(entry.size()) != inner_expected)
      throw InputError(what + " entry " + std::to_string(i) + " has wrong length");
    for (Index k = 0; k < inner_expected; ++k) {
      const json& cell = entry[static_cast<size_t>(k)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw InputError(what + " cells must be [re, im]");
      Complex z(cell[0].get<double>(), cell[1].get<double>());
      if (column_major)
        m(k, i) = z;
      else
        m(i, k) = z;
    }
  }
  return m;
}

DecompositionPtr decompFromJson(const json& j, Index label_count_expected) {
  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
    throw InputError("missing or empty \"blocks\"");
  std::vector<Index> sizes;
  for (const auto& s : j["blocks"]) {
    if (!s.is_number_integer()) throw InputError("block sizes must be integers");
    sizes.push_back(s.get<Index>());
  }
  std::vector<Label> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw InputError("\"labels\" must be an array");
    for (const auto& l : j["labels"]) labels.push_back(labelFromJson(l));
  } else {
    for (Index i = 1; i <= label_count_expected; ++i) labels.emplace_back(i);
  }
  if (static_cast<Index>(labels.size()) != label_count_expected)
    throw InputError("label count does not match the data");
  try {
    return std::make_shared<const IndexDecomposition>(std::move(labels), std::move(sizes));
  } catch (const std::exception& e) {
    throw InputError(std::string("bad decomposition: ") + e.what());
  }
}

}  // namespace

void writeFrameJson(const std::string& path, const FrameSnapshot& snap) {
  json j;
  j["ambient_dim"] = snap.ambientDim();
  j["blocks"] = snap.decomp->sizes();
  json labels = json::array();
  for (const auto& l : snap.decomp->labels()) labels.push_back(labelToJson(l));
  j["labels"] = std::move(labels);
  j["vectors"] = complexMatrixToJson(snap.vectors, true);
  if (snap.has_dual) j["dual"] = complexMatrixToJson(snap.dual, true);
  storeJson(path, j);
}

FrameSnapshot readFrameJson(const std::string& path) {
  json j = loadJson(path);
  if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer())
    throw InputError(path + ": missing integer \"ambient_dim\"");
  Index d = j["ambient_dim"].get<Index>();
  if (d < 0) throw InputError(path + ": negative ambient dimension");
  if (!j.contains("vectors")) throw InputError(path + ": missing \"vectors\"");
  ComplexMatrix v = complexMatrixFromJson(j["vectors"], d, true, "vectors");
  DecompositionPtr decomp = decompFromJson(j, v.cols());
  try {
    if (j.contains("dual")) {
      ComplexMatrix dual = complexMatrixFromJson(j["dual"], d, true, "dual");
      return FrameSnapshot(std::move(v), std::move(decomp), std::move(dual));
    }
    return FrameSnapshot(std::move(v), std::move(decomp));
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

void writeMatrixJson(const std::string& path, const OperatorSnapshot& op) {
  json j;
  j["dim"] = op.matrix.rows();
  j["blocks"] = op.decomp->sizes();
  json labels = json::array();
  for (const auto& l : op.decomp->labels()) labels.push_back(labelToJson(l));
  j["labels"] = std::move(labels);
  j["entries"] = complexMatrixToJson(op.matrix, false);
  storeJson(path, j);
}

OperatorSnapshot readMatrixJson(const std::string& path) {
  json j = loadJson(path);
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw InputError(path + ": missing integer \"dim\"");
  Index dim = j["dim"].get<Index>();
  if (!j.contains("entries")) throw InputError(path + ": missing \"entries\"");
  ComplexMatrix m = complexMatrixFromJson(j["entries"], dim, false, "entries");
  if (m.rows() != dim) throw InputError(path + ": row count does not match \"dim\"");
  DecompositionPtr decomp;
  if (j.contains("blocks")) {
    decomp = decompFromJson(j, dim);
  } else {
    std::vector<Label> labels;
    for (Index i = 1; i <= dim; ++i) labels.emplace_back(i);
    decomp = std::make_shared<const IndexDecomposition>(std::move(labels),
                                                        std::vector<Index>{dim});
  }
  try {
    return OperatorSnapshot(std::move(m), std::move(decomp));
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

void writeLatticeJson(const std::string& path, const GaborLattice& lat) {
  json j;
  if (lat.modulus) j["N"] = *lat.modulus;
  json pts = json::array();
  for (const auto& p : lat.points) pts.push_back(json::array({p.first, p.second}));
  j["points"] = std::move(pts);
  if (!lat.phases.empty()) j["phases"] = lat.phases;
  storeJson(path, j);
}

GaborLattice readLatticeJson(const std::string& path) {
  json j = loadJson(path);
  GaborLattice lat;
  if (j.contains("N")) {
    if (!j["N"].is_number_integer() || j["N"].get<Index>() <= 0)
      throw InputError(path + ": \"N\" must be a positive integer");
    lat.modulus = j["N"].get<Index>();
  }
  if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
    throw InputError(path + ": missing or empty \"points\"");
  for (const auto& p : j["points"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw InputError(path + ": points must be [t, w] pairs");
    lat.points.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  if (j.contains("phases")) {
    if (!j["phases"].is_array() || j["phases"].size() != lat.points.size())
      throw InputError(path + ": phases must cover every point");
    for (const auto& ph : j["phases"]) {
      if (!ph.is_number()) throw InputError(path + ": phases must be numbers");
      lat.phases.push_back(ph.get<double>());
    }
  }
  return lat;
}

void writeSequenceCsv(const std::string& path, const RealSequence& x) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "n,size,value\n";
  for (Index n = 1; n <= x.depth(); ++n)
    out << n << ',' << x.decomp->blockSize(n) << ',' << formatG17(x.values(n - 1)) << '\n';
}

RealSequence readSequenceCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<Index> sizes;
  std::vector<double> values;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.find("value") != std::string::npos) continue;  // header
    std::istringstream row(line);
    std::string n_s, size_s, value_s;
    if (!std::getline(row, n_s, ',') || !std::getline(row, size_s, ',') ||
        !std::getline(row, value_s))
      throw InputError(path + ":" + std::to_string(lineno) + ": expected n,size,value");
    try {
      sizes.push_back(static_cast<Index>(std::stoll(size_s)));
      values.push_back(std::stod(value_s));
    } catch (const std::exception&) {
      throw InputError(path + ":" + std::to_string(lineno) + ": not numeric");
    }
  }
  if (values.empty()) throw InputError(path + ": no data rows");
  RealVector v(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) v(static_cast<Index>(i)) = values[i];
  try {
    auto decomp = std::make_shared<const IndexDecomposition>(
        IndexDecomposition::fromBlockSizes(std::move(sizes)));
    return RealSequence(std::move(v), std::move(decomp));
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void writeProfileJson(const std::string& path, const MeasureProfile& p) {
  json j;
  j["liminf"] = p.liminf;
  j["limsup"] = p.limsup;
  json clusters = json::array();
  for (const auto& c : p.clusters) clusters.push_back(json::array({c.first, c.second}));
  j["clusters"] = std::move(clusters);
  j["converged"] = p.converged;
  j["window"] = json::array({p.window_first, p.window_last});
  if (p.stability_digits.size() > 0) {
    json stab = json::array();
    for (Index i = 0; i < p.stability_digits.size(); ++i) stab.push_back(p.stability_digits(i));
    j["stability"] = std::move(stab);
  }
  storeJson(path, j);
}

void writeChannelCsv(const std::string& path, const ChannelReport& rep) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "n,analytic,empirical,stderr,z\n";
  for (const auto& row : rep.rows)
    out << row.block << ',' << formatG17(row.analytic) << ',' << formatG17(row.empirical)
        << ',' << formatG17(row.std_error) << ',' << formatG17(row.z) << '\n';
}

ValidationReport validateFrameFile(const std::string& path) {
  ValidationReport rep;
  json j;
  try {
    j = loadJson(path);
  } catch (const InputError& e) {
    rep.errors.push_back(e.what());
    return rep;
  }

  Index d = -1;
  if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer())
    rep.errors.push_back("missing integer \"ambient_dim\"");
  else if ((d = j["ambient_dim"].get<Index>()) < 0)
    rep.errors.push_back("negative ambient dimension");

  Index vectors = -1;
  if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty()) {
    rep.errors.push_back("missing or empty \"vectors\"");
  } else {
    vectors = static_cast<Index>(j["vectors"].size());
    if (d >= 0) {
      for (Index i = 0; i < vectors; ++i) {
        const json& entry = j["vectors"][static_cast<size_t>(i)];
        if (!entry.is_array() || static_cast<Index>(entry.size()) != d) {
          rep.errors.push_back("vector " + std::to_string(i) + " length differs from ambient_dim");
          continue;
        }
        for (const auto& cell : entry)
          if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
              !cell[1].is_number()) {
            rep.errors.push_back("vector " + std::to_string(i) + " has a non [re,im] cell");
            break;
          }
      }
    }
  }

  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty()) {
    rep.errors.push_back("missing or empty \"blocks\"");
  } else {
    Index prev = 0;
    bool bad = false;
    for (const auto& s : j["blocks"]) {
      if (!s.is_number_integer() || s.get<Index>() < 1 || s.get<Index>() < prev) {
        bad = true;
        break;
      }
      prev = s.get<Index>();
    }
    if (bad) rep.errors.push_back("\"blocks\" must be positive and nondecreasing");
    else if (vectors >= 0 && prev > vectors)
      rep.errors.push_back("last block exceeds the vector count");
  }

  if (j.contains("labels")) {
    if (!j["labels"].is_array())
      rep.errors.push_back("\"labels\" must be an array");
    else if (vectors >= 0 && static_cast<Index>(j["labels"].size()) != vectors)
      rep.errors.push_back("label count differs from vector count");
  }

  if (j.contains("dual")) {
    if (!j["dual"].is_array() ||
        (vectors >= 0 && static_cast<Index>(j["dual"].size()) != vectors))
      rep.errors.push_back("dual count differs from vector count");
    else if (d >= 0)
      for (Index i = 0; i < static_cast<Index>(j["dual"].size()); ++i)
        if (!j["dual"][static_cast<size_t>(i)].is_array() ||
            static_cast<Index>(j["dual"][static_cast<size_t>(i)].size()) != d) {
          rep.errors.push_back("dual " + std::to_string(i) + " length differs from ambient_dim");
          break;
        }
  }

  rep.ok = rep.errors.empty();
  return rep;
}

}  // namespace framekit
