#include "iclab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace iclab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

const json& field(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const json& j, const std::string& where, const char* key) {
  const json& v = field(j, where, key);
  if (!v.is_number_integer()) {
    fail(where + "." + key, "expected an integer");
  }
  return v.get<int>();
}

Real real_at(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<Real>();
}

// Reads a [x][y][a][b]-nested tensor into the block-matrix layout.
Matrix tensor_from_json(const json& v, const std::string& where, int nx,
                        int ny, int na, int nb) {
  Matrix table(nx * na, ny * nb);
  if (!v.is_array() || static_cast<int>(v.size()) != nx) {
    fail(where, "expected an array of length " + std::to_string(nx));
  }
  for (int x = 0; x < nx; ++x) {
    const json& vy = v[x];
    const std::string wx = where + "[" + std::to_string(x) + "]";
    if (!vy.is_array() || static_cast<int>(vy.size()) != ny) {
      fail(wx, "expected an array of length " + std::to_string(ny));
    }
    for (int y = 0; y < ny; ++y) {
      const json& va = vy[y];
      const std::string wy = wx + "[" + std::to_string(y) + "]";
      if (!va.is_array() || static_cast<int>(va.size()) != na) {
        fail(wy, "expected an array of length " + std::to_string(na));
      }
      for (int a = 0; a < na; ++a) {
        const json& vb = va[a];
        const std::string wa = wy + "[" + std::to_string(a) + "]";
        if (!vb.is_array() || static_cast<int>(vb.size()) != nb) {
          fail(wa, "expected an array of length " + std::to_string(nb));
        }
        for (int b = 0; b < nb; ++b) {
          table(x * na + a, y * nb + b) =
              real_at(vb[b], wa + "[" + std::to_string(b) + "]");
        }
      }
    }
  }
  return table;
}

json tensor_to_json(const Matrix& table, int nx, int ny, int na, int nb) {
  json v = json::array();
  for (int x = 0; x < nx; ++x) {
    json vy = json::array();
    for (int y = 0; y < ny; ++y) {
      json va = json::array();
      for (int a = 0; a < na; ++a) {
        json vb = json::array();
        for (int b = 0; b < nb; ++b) {
          vb.push_back(table(x * na + a, y * nb + b));
        }
        va.push_back(std::move(vb));
      }
      vy.push_back(std::move(va));
    }
    v.push_back(std::move(vy));
  }
  return v;
}

std::vector<int> int_array(const json& j, const std::string& where,
                           const char* key) {
  const json& v = field(j, where, key);
  if (!v.is_array()) fail(where + "." + key, "expected an array");
  std::vector<int> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      fail(where + "." + key + "[" + std::to_string(i) + "]",
           "expected an integer");
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

template <typename Load>
auto from_file(const std::string& path, Load&& load) {
  return load(load_json(path), path);
}

}  // namespace

json box_to_json(const BipartiteBox& box) {
  return json{{"na", box.na()},
              {"nb", box.nb()},
              {"nx", box.nx()},
              {"ny", box.ny()},
              {"probs", tensor_to_json(box.table(), box.nx(), box.ny(),
                                       box.na(), box.nb())}};
}

BipartiteBox box_from_json(const json& j, const std::string& where) {
  const int nx = int_field(j, where, "nx");
  const int ny = int_field(j, where, "ny");
  const int na = int_field(j, where, "na");
  const int nb = int_field(j, where, "nb");
  if (nx < 1 || ny < 1 || na < 2 || nb < 2) {
    fail(where, "box shape must have nx,ny >= 1 and na,nb >= 2");
  }
  Matrix table = tensor_from_json(field(j, where, "probs"), where + ".probs",
                                  nx, ny, na, nb);
  try {
    return BipartiteBox(nx, ny, na, nb, std::move(table));
  } catch (const std::invalid_argument& err) {
    fail(where, err.what());
  }
}

json functional_to_json(const BellFunctional& functional) {
  json j{{"name", functional.name},
         {"na", functional.na},
         {"nb", functional.nb},
         {"nx", functional.nx},
         {"ny", functional.ny},
         {"coefficients",
          tensor_to_json(functional.coefficients, functional.nx, functional.ny,
                         functional.na, functional.nb)}};
  if (functional.classical_value) {
    j["classical_value"] = *functional.classical_value;
  }
  if (functional.maximal_value) j["maximal_value"] = *functional.maximal_value;
  return j;
}

BellFunctional functional_from_json(const json& j, const std::string& where) {
  BellFunctional f;
  f.name = field(j, where, "name").is_string()
               ? field(j, where, "name").get<std::string>()
               : "";
  f.nx = int_field(j, where, "nx");
  f.ny = int_field(j, where, "ny");
  f.na = int_field(j, where, "na");
  f.nb = int_field(j, where, "nb");
  if (f.nx < 1 || f.ny < 1 || f.na < 1 || f.nb < 1) {
    fail(where, "functional shape must be positive");
  }
  f.coefficients = tensor_from_json(field(j, where, "coefficients"),
                                    where + ".coefficients", f.nx, f.ny, f.na,
                                    f.nb);
  if (j.contains("classical_value")) {
    f.classical_value = real_at(j["classical_value"], where + ".classical_value");
  }
  if (j.contains("maximal_value")) {
    f.maximal_value = real_at(j["maximal_value"], where + ".maximal_value");
  }
  return f;
}

json channel_to_json(const DiscreteChannel& channel) {
  json rows = json::array();
  for (int i = 0; i < channel.size(); ++i) {
    json row = json::array();
    for (int jcol = 0; jcol < channel.size(); ++jcol) {
      row.push_back(channel.transition()(i, jcol));
    }
    rows.push_back(std::move(row));
  }
  return json{{"d", channel.size()}, {"transition", std::move(rows)}};
}

DiscreteChannel channel_from_json(const json& j, const std::string& where) {
  const int d = int_field(j, where, "d");
  if (d < 2) fail(where, "channel alphabet must have size >= 2");
  const json& rows = field(j, where, "transition");
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    fail(where + ".transition",
         "expected " + std::to_string(d) + " rows");
  }
  Matrix t(d, d);
  for (int i = 0; i < d; ++i) {
    const std::string wi = where + ".transition[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d) {
      fail(wi, "expected " + std::to_string(d) + " entries");
    }
    for (int k = 0; k < d; ++k) {
      t(i, k) = real_at(rows[i][k], wi + "[" + std::to_string(k) + "]");
    }
  }
  try {
    return DiscreteChannel(std::move(t));
  } catch (const std::invalid_argument& err) {
    fail(where, err.what());
  }
}

json protocol_to_json(const Protocol& protocol) {
  return json{{"n_data", protocol.n_data},
              {"data_alphabet", protocol.data_alphabet},
              {"message_alphabet", protocol.message_alphabet},
              {"sender_outcomes", protocol.sender_outcomes},
              {"receiver_outcomes", protocol.receiver_outcomes},
              {"x_table", protocol.x_table},
              {"m_table", protocol.m_table},
              {"y_map", protocol.y_map},
              {"decoder_table", protocol.decoder_table}};
}

Protocol protocol_from_json(const json& j, const std::string& where) {
  Protocol p;
  p.n_data = int_field(j, where, "n_data");
  p.data_alphabet = int_field(j, where, "data_alphabet");
  p.message_alphabet = int_field(j, where, "message_alphabet");
  p.sender_outcomes = int_field(j, where, "sender_outcomes");
  p.receiver_outcomes = int_field(j, where, "receiver_outcomes");
  p.x_table = int_array(j, where, "x_table");
  p.m_table = int_array(j, where, "m_table");
  p.y_map = int_array(j, where, "y_map");
  p.decoder_table = int_array(j, where, "decoder_table");
  if (p.n_data < 1 || p.data_alphabet < 2 || p.message_alphabet < 2 ||
      p.sender_outcomes < 2 || p.receiver_outcomes < 2) {
    fail(where, "protocol sizes must be positive (alphabets >= 2)");
  }
  if (p.x_table.size() != p.tuple_count()) {
    fail(where + ".x_table",
         "expected " + std::to_string(p.tuple_count()) + " entries, got " +
             std::to_string(p.x_table.size()));
  }
  if (p.m_table.size() != p.tuple_count() * p.sender_outcomes) {
    fail(where + ".m_table",
         "expected " +
             std::to_string(p.tuple_count() * p.sender_outcomes) +
             " entries, got " + std::to_string(p.m_table.size()));
  }
  if (p.y_map.size() != static_cast<std::size_t>(p.n_data)) {
    fail(where + ".y_map", "expected " + std::to_string(p.n_data) +
                               " entries, got " +
                               std::to_string(p.y_map.size()));
  }
  const std::size_t expected_dec = static_cast<std::size_t>(p.n_data) *
                                   p.message_alphabet * p.receiver_outcomes;
  if (p.decoder_table.size() != expected_dec) {
    fail(where + ".decoder_table",
         "expected " + std::to_string(expected_dec) + " entries, got " +
             std::to_string(p.decoder_table.size()));
  }
  return p;
}

json bound_result_to_json(const BoundResult& result) {
  json j{{"e_bound", result.e_bound},
         {"margin_at_bound", result.margin_at_bound},
         {"iterations", result.iterations},
         {"tolerance", result.tolerance},
         {"bound_found", result.bound_found},
         {"monotone_scan", result.monotone_scan},
         {"fit_residual", result.fit_residual}};
  if (std::isfinite(result.e_c)) {
    j["e_c"] = result.e_c;
  } else {
    j["e_c"] = nullptr;  // asymmetric channel
  }
  return j;
}

json search_result_to_json(const SearchResult& result,
                           const SearchConfig& config) {
  json j = protocol_to_json(result.protocol);
  j["provenance"] = json{
      {"generator", "mt19937_64"},
      {"seed", result.seed},
      {"score", result.score},
      {"evaluations", result.evaluations},
      {"hit_evaluation_cap", result.hit_evaluation_cap},
      {"improvements", result.best_trace.size()},
      {"config",
       json{{"initial_temperature", config.initial_temperature},
            {"cooling_factor", config.cooling_factor},
            {"steps_per_temperature", config.steps_per_temperature},
            {"max_evaluations", config.max_evaluations},
            {"move_weights", config.move_weights}}}};
  return j;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw SchemaError(path + ": " + err.what());
  }
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

BipartiteBox load_box(const std::string& path) {
  return from_file(path, [](const json& j, const std::string& where) {
    return box_from_json(j, where);
  });
}

BellFunctional load_functional(const std::string& path) {
  return from_file(path, [](const json& j, const std::string& where) {
    return functional_from_json(j, where);
  });
}

DiscreteChannel load_channel(const std::string& path) {
  return from_file(path, [](const json& j, const std::string& where) {
    return channel_from_json(j, where);
  });
}

Protocol load_protocol(const std::string& path) {
  return from_file(path, [](const json& j, const std::string& where) {
    return protocol_from_json(j, where);
  });
}

}  // namespace iclab
