#include "speechbio/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "speechbio/dataset.hpp"
#include "speechbio/errors.hpp"

namespace speechbio {

using nlohmann::json;

namespace {

json mlp_to_json_obj(const MlpModel& m) {
    return json{{"type", "mlp"},
                {"feature_ordering", kFeatureOrderingVersion},
                {"n_inputs", m.n_inputs},
                {"n_hidden", m.n_hidden},
                {"n_outputs", m.n_outputs},
                {"w1", m.w1},
                {"b1", m.b1},
                {"w2", m.w2},
                {"b2", m.b2},
                {"feature_min", m.feature_min},
                {"feature_max", m.feature_max},
                {"classes", m.classes},
                {"seed", m.seed}};
}

MlpModel mlp_from_json_obj(const json& j) {
    if (j.value("type", "") != "mlp") throw SchemaError("model file is not an mlp model");
    MlpModel m;
    m.n_inputs = j.at("n_inputs").get<int>();
    m.n_hidden = j.at("n_hidden").get<int>();
    m.n_outputs = j.at("n_outputs").get<int>();
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    m.feature_min = j.at("feature_min").get<std::vector<double>>();
    m.feature_max = j.at("feature_max").get<std::vector<double>>();
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    if (m.w1.size() != static_cast<std::size_t>(m.n_hidden) * m.n_inputs ||
        m.w2.size() != static_cast<std::size_t>(m.n_outputs) * m.n_hidden) {
        throw SchemaError("mlp model: weight shapes do not match layer sizes");
    }
    return m;
}

json bagging_to_json_obj(const BaggingModel& m) {
    json members = json::array();
    for (const DecisionTree& tree : m.members) {
        json nodes = json::array();
        for (const TreeNode& n : tree.nodes) {
            nodes.push_back(json{{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"label", n.label}});
        }
        members.push_back(json{{"nodes", std::move(nodes)}});
    }
    return json{{"type", "bagging"},
                {"feature_ordering", kFeatureOrderingVersion},
                {"classes", m.classes},
                {"seed", m.seed},
                {"members", std::move(members)}};
}

BaggingModel bagging_from_json_obj(const json& j) {
    if (j.value("type", "") != "bagging") throw SchemaError("model file is not a bagging model");
    BaggingModel m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const json& member : j.at("members")) {
        DecisionTree tree;
        for (const json& n : member.at("nodes")) {
            tree.nodes.push_back(TreeNode{n.at("feature").get<int>(),
                                          n.at("threshold").get<double>(),
                                          n.at("left").get<int>(), n.at("right").get<int>(),
                                          n.at("label").get<int>()});
        }
        m.members.push_back(std::move(tree));
    }
    return m;
}

}  // namespace

std::string mlp_to_json(const MlpModel& model) { return mlp_to_json_obj(model).dump(2); }

MlpModel mlp_from_json(const std::string& text) {
    return mlp_from_json_obj(json::parse(text));
}

std::string bagging_to_json(const BaggingModel& model) {
    return bagging_to_json_obj(model).dump(2);
}

BaggingModel bagging_from_json(const std::string& text) {
    return bagging_from_json_obj(json::parse(text));
}

std::string one_class_to_json(const OneClassModel& model) {
    json j{{"type", "one_class"},
           {"feature_ordering", kFeatureOrderingVersion},
           {"target_class", model.target_class},
           {"base_kind", one_class_base_to_string(model.base_kind)},
           {"threshold", model.threshold},
           {"params",
            json{{"artificial_ratio", model.params.artificial_ratio},
                 {"expansion_margin", model.params.expansion_margin},
                 {"rejection_budget", model.params.rejection_budget},
                 {"n_bags", model.params.n_bags}}}};
    if (model.base_kind == OneClassBase::Mlp) {
        j["base"] = mlp_to_json_obj(*model.mlp);
    } else {
        j["base"] = bagging_to_json_obj(*model.bagging);
    }
    return j.dump(2);
}

OneClassModel one_class_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("type", "") != "one_class") throw SchemaError("model file is not a one-class model");
    OneClassModel m;
    m.target_class = j.at("target_class").get<std::string>();
    m.base_kind = one_class_base_from_string(j.at("base_kind").get<std::string>());
    m.threshold = j.at("threshold").get<double>();
    const json& p = j.at("params");
    m.params.artificial_ratio = p.at("artificial_ratio").get<double>();
    m.params.expansion_margin = p.at("expansion_margin").get<double>();
    m.params.rejection_budget = p.at("rejection_budget").get<double>();
    m.params.n_bags = p.at("n_bags").get<int>();
    if (m.base_kind == OneClassBase::Mlp) {
        m.mlp = mlp_from_json_obj(j.at("base"));
    } else {
        m.bagging = bagging_from_json_obj(j.at("base"));
    }
    return m;
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out << text;
    if (!out) throw IoError("short write to " + path);
}

std::string load_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace speechbio
