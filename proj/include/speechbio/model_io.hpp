#pragma once

#include <string>

#include "speechbio/one_class.hpp"

namespace speechbio {

/// Self-describing JSON model files. Weights are written in shortest
/// round-trip decimal, so read(write(m)) reproduces every number exactly;
/// each file records the canonical feature-ordering version it was trained
/// against.

std::string mlp_to_json(const MlpModel& model);
MlpModel mlp_from_json(const std::string& text);

std::string bagging_to_json(const BaggingModel& model);
BaggingModel bagging_from_json(const std::string& text);

std::string one_class_to_json(const OneClassModel& model);
OneClassModel one_class_from_json(const std::string& text);

void save_text_file(const std::string& path, const std::string& text);
std::string load_text_file(const std::string& path);

}  // namespace speechbio
