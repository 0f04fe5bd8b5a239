#include "dlord/motion_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dlord/errors.hpp"

namespace dlord::motion {

namespace {

using nlohmann::json;

json skeleton_to_json(const Skeleton& sk) {
  json edges = json::array();
  for (const auto& [p, c] : sk.edges) edges.push_back(json::array({p, c}));
  return json{{"edges", std::move(edges)},
              {"root", sk.root},
              {"pelvis_pair", json::array({sk.pelvis.first, sk.pelvis.second})},
              {"front_marker", sk.front}};
}

Skeleton skeleton_from_json(const json& j) {
  Skeleton sk;
  try {
    sk.root = j.at("root").get<int>();
    const auto& pp = j.at("pelvis_pair");
    if (!pp.is_array() || pp.size() != 2)
      throw ParseError("skeleton.pelvis_pair must be a two-element array");
    sk.pelvis = {pp[0].get<int>(), pp[1].get<int>()};
    sk.front = j.at("front_marker").get<int>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw ParseError("skeleton.edges entries must be [parent, child] pairs");
      sk.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("skeleton block: ") + ex.what());
  }
  return sk;
}

}  // namespace

void write_motion(const std::filesystem::path& path, const MotionSequence& seq,
                  const Skeleton& skeleton) {
  seq.validate();
  skeleton.validate(seq.marker_count());

  json frames = json::array();
  for (std::int64_t t = 0; t < seq.num_frames; ++t) {
    json frame = json::array();
    for (std::int64_t j = 0; j < seq.marker_count(); ++j)
      frame.push_back(json::array({seq.at(t, j, 0), seq.at(t, j, 1), seq.at(t, j, 2)}));
    frames.push_back(std::move(frame));
  }
  json doc{{"version", 1},
           {"id", seq.id},
           {"fps", seq.fps},
           {"marker_names", seq.marker_names},
           {"skeleton", skeleton_to_json(skeleton)},
           {"frames", std::move(frames)}};

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << doc.dump();
  if (!out) throw IoError("write failed: " + path.string());
}

MotionFile read_motion(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open motion file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }

  MotionFile mf;
  try {
    if (doc.at("version").get<int>() != 1)
      throw ParseError(path.string() + ": unsupported motion file version");
    mf.sequence.id = doc.at("id").get<std::string>();
    mf.sequence.fps = doc.at("fps").get<double>();
    mf.sequence.marker_names = doc.at("marker_names").get<std::vector<std::string>>();
  } catch (const json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  mf.skeleton = skeleton_from_json(doc.value("skeleton", json::object()));

  const auto j_count = mf.sequence.marker_count();
  if (j_count < 2) throw SchemaError(path.string() + ": needs at least two markers");

  const auto& frames = doc.find("frames") != doc.end() ? doc["frames"] : json();
  if (!frames.is_array()) throw ParseError(path.string() + ": frames must be an array");
  const auto t_count = static_cast<std::int64_t>(frames.size());
  if (t_count < 2) throw SchemaError(path.string() + ": needs at least two frames");

  mf.sequence.num_frames = t_count;
  mf.sequence.positions.resize(static_cast<std::size_t>(t_count * j_count * 3));
  for (std::int64_t t = 0; t < t_count; ++t) {
    const auto& frame = frames[static_cast<std::size_t>(t)];
    if (!frame.is_array() || static_cast<std::int64_t>(frame.size()) != j_count)
      throw ParseError(path.string() + ": frame " + std::to_string(t) + " expected " +
                       std::to_string(j_count) + " markers, got " +
                       std::to_string(frame.size()));
    for (std::int64_t j = 0; j < j_count; ++j) {
      const auto& p = frame[static_cast<std::size_t>(j)];
      if (!p.is_array() || p.size() != 3)
        throw ParseError(path.string() + ": frame " + std::to_string(t) + " marker " +
                         std::to_string(j) + " must hold [x, y, z]");
      for (int axis = 0; axis < 3; ++axis) {
        const auto& c = p[static_cast<std::size_t>(axis)];
        if (!c.is_number())
          throw ParseError(path.string() + ": frame " + std::to_string(t) + " marker " +
                           std::to_string(j) + " has a non-numeric coordinate");
        mf.sequence.at(t, j, axis) = c.get<double>();
      }
    }
  }

  try {
    mf.sequence.validate();
    mf.skeleton.validate(j_count);
  } catch (const InvalidArgument& ex) {
    throw SchemaError(path.string() + ": " + ex.what());
  }
  return mf;
}

void write_dataset(const std::filesystem::path& dir, const LabeledDataset& dataset,
                   const std::string& manifest_name) {
  dataset.validate();
  std::filesystem::create_directories(dir / "motions");
  std::ofstream manifest(dir / manifest_name);
  if (!manifest) throw IoError("cannot open for writing: " + (dir / manifest_name).string());
  manifest << "path,class_label,content_label\n";
  for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
    const auto& seq = dataset.sequences[i];
    const std::string rel = "motions/" + seq.id + ".json";
    write_motion(dir / rel, seq, dataset.skeleton);
    manifest << rel << "," << dataset.class_labels[i] << "," << dataset.content_labels[i] << "\n";
  }
  if (!manifest) throw IoError("manifest write failed");
}

LabeledDataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open dataset manifest: " + manifest_path.string());
  const auto base = manifest_path.parent_path();

  std::string line;
  if (!std::getline(in, line)) throw ParseError(manifest_path.string() + ": empty manifest");
  if (line != "path,class_label,content_label")
    throw ParseError(manifest_path.string() + ":1: expected header `path,class_label,content_label`");

  LabeledDataset ds;
  bool first = true;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string path_field, class_field, content_field;
    if (!std::getline(row, path_field, ',') || !std::getline(row, class_field, ',') ||
        !std::getline(row, content_field))
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) +
                       ": expected `path,class_label,content_label`");
    int class_label = 0, content_label = 0;
    try {
      class_label = std::stoi(class_field);
      content_label = std::stoi(content_field);
    } catch (const std::exception&) {
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) +
                       ": labels must be integers");
    }

    auto mf = read_motion(base / path_field);
    if (first) {
      ds.skeleton = mf.skeleton;
      first = false;
    } else if (!(ds.skeleton == mf.skeleton) ||
               mf.sequence.marker_names != ds.sequences.front().marker_names) {
      throw SchemaError(manifest_path.string() + ":" + std::to_string(line_no) +
                        ": skeleton or markers differ from the first sequence");
    }
    ds.sequences.push_back(std::move(mf.sequence));
    ds.class_labels.push_back(class_label);
    ds.content_labels.push_back(content_label);
  }
  if (ds.sequences.empty()) throw ParseError(manifest_path.string() + ": no rows");

  int max_class = 0, max_content = 0;
  for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
    if (ds.class_labels[i] < 0 || ds.content_labels[i] < 0)
      throw SchemaError(manifest_path.string() + ": negative label");
    max_class = std::max(max_class, ds.class_labels[i]);
    max_content = std::max(max_content, ds.content_labels[i]);
  }
  ds.num_classes = max_class + 1;
  ds.num_contents = max_content + 1;
  try {
    ds.validate();
  } catch (const InvalidArgument& ex) {
    throw SchemaError(manifest_path.string() + ": " + ex.what());
  }
  return ds;
}

void write_normalization(const std::filesystem::path& path, const NormalizationParams& params) {
  params.validate();
  json doc{{"version", 1},
           {"min", json::array({params.min_coord[0], params.min_coord[1], params.min_coord[2]})},
           {"max", json::array({params.max_coord[0], params.max_coord[1], params.max_coord[2]})}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << doc.dump();
}

NormalizationParams read_normalization(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open normalization file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  NormalizationParams p;
  try {
    for (int a = 0; a < 3; ++a) {
      p.min_coord[static_cast<std::size_t>(a)] = doc.at("min").at(a).get<double>();
      p.max_coord[static_cast<std::size_t>(a)] = doc.at("max").at(a).get<double>();
    }
  } catch (const json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  p.validate();
  return p;
}

}  // namespace dlord::motion
