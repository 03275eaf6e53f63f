#include "ogn/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "ogn/error.hpp"

namespace ogn::io {

using nlohmann::json;

std::size_t FloatTensor::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

namespace {

constexpr char kMagic[4] = {'O', 'G', 'N', 'T'};
constexpr std::size_t kFixedHeader = 8;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const FloatTensor& t) {
  if (t.dims.size() > 255) throw Error(ErrorCode::kInvalidInput, "tensor has more than 255 dims");
  if (t.element_count() != t.data.size()) {
    throw Error(ErrorCode::kInvalidInput, "tensor data length does not match its dims");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeader + 4 * t.dims.size() + 4 * t.data.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u16(out, kTensorVersion);
  out.push_back(kDtypeFloat32);
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (std::uint32_t d : t.dims) put_u32(out, d);
  for (float f : t.data) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

FloatTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "expected OGNT");
  }
  if (bytes.size() < kFixedHeader) throw Error(ErrorCode::kTruncated, "header shorter than 8 bytes");
  const std::uint16_t version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kTensorVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "tensor version " + std::to_string(version));
  }
  if (bytes[6] != kDtypeFloat32) {
    throw Error(ErrorCode::kUnsupportedDtype, "dtype code " + std::to_string(bytes[6]));
  }
  const std::size_t ndim = bytes[7];
  if (bytes.size() < kFixedHeader + 4 * ndim) throw Error(ErrorCode::kTruncated, "dims cut short");

  FloatTensor t;
  std::uint64_t count = 1;
  constexpr std::uint64_t kMaxElements = std::numeric_limits<std::uint64_t>::max() / 4;
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = get_u32(bytes, kFixedHeader + 4 * i);
    if (d != 0 && count > kMaxElements / d) {
      throw Error(ErrorCode::kDimOverflow, "element count overflows 64 bits");
    }
    count *= d;
    t.dims.push_back(d);
  }
  const std::size_t payload_at = kFixedHeader + 4 * ndim;
  const std::uint64_t available = bytes.size() - payload_at;
  if (available < count * 4) {
    throw Error(ErrorCode::kTruncated, "payload holds " + std::to_string(available) + " bytes, dims need " +
                                           std::to_string(count * 4));
  }
  if (available > count * 4) throw Error(ErrorCode::kTrailingData, "bytes after payload");
  t.data.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    t.data[i] = std::bit_cast<float>(get_u32(bytes, payload_at + 4 * i));
  }
  return t;
}

void write_tensor(const FloatTensor& t, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

FloatTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

FloatTensor to_tensor(const Grid3& g) {
  FloatTensor t;
  t.dims = {static_cast<std::uint32_t>(g.channels()), static_cast<std::uint32_t>(g.rows()),
            static_cast<std::uint32_t>(g.cols())};
  t.data.assign(g.data().begin(), g.data().end());
  return t;
}

Grid3 grid_from_tensor(const FloatTensor& t) {
  if (t.dims.size() != 3) throw Error(ErrorCode::kInvalidInput, "expected a 3-d tensor");
  for (std::uint32_t d : t.dims) {
    if (d > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
      throw Error(ErrorCode::kInvalidInput, "tensor dim too large");
    }
  }
  Grid3 g(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]));
  std::copy(t.data.begin(), t.data.end(), g.data().begin());
  return g;
}

FloatTensor offsets_to_tensor(const OffsetSet& o) {
  if (!o.dx.same_shape(o.dy)) throw Error(ErrorCode::kInvalidInput, "offset planes differ in shape");
  FloatTensor t = to_tensor(o.dx);
  t.dims.insert(t.dims.begin(), 2);
  t.data.insert(t.data.end(), o.dy.data().begin(), o.dy.data().end());
  return t;
}

OffsetSet offsets_from_tensor(const FloatTensor& t) {
  if (t.dims.size() != 4 || t.dims[0] != 2) {
    throw Error(ErrorCode::kInvalidInput, "expected a [2, K, H, W] offset tensor");
  }
  FloatTensor half;
  half.dims.assign(t.dims.begin() + 1, t.dims.end());
  const std::size_t n = half.element_count();
  half.data.assign(t.data.begin(), t.data.begin() + static_cast<std::ptrdiff_t>(n));
  OffsetSet o;
  o.dx = grid_from_tensor(half);
  half.data.assign(t.data.begin() + static_cast<std::ptrdiff_t>(n), t.data.end());
  o.dy = grid_from_tensor(half);
  return o;
}

namespace {

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, std::string(what) + " is not finite");
  return v;
}

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::kSchema, what); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) schema_error("expected an object holding '" + std::string(key) + "'");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) schema_error(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) schema_error(std::string(what) + " must be an integer");
  return j.get<int>();
}

const json& array(const json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string(what) + " must be an array");
  return j;
}

void check_version(const json& doc) {
  const int v = integer(field(doc, "schema_version"), "schema_version");
  if (v != kSchemaVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "schema_version " + std::to_string(v));
  }
}

json box_array(const Box& b) {
  return json::array({finite(b.x_min, "box"), finite(b.y_min, "box"), finite(b.x_max, "box"),
                      finite(b.y_max, "box")});
}

Box box_from(const json& j) {
  array(j, "box");
  if (j.size() != 4) schema_error("box must hold 4 numbers");
  Box b{number(j[0], "box"), number(j[1], "box"), number(j[2], "box"), number(j[3], "box"), 0.0};
  if (!(b.x_min <= b.x_max && b.y_min <= b.y_max)) schema_error("box corners out of order");
  return b;
}

json keypoints_to_json(const Pose& pose) {
  json flat = json::array();
  for (const Keypoint& k : pose.keypoints) {
    const bool labeled = is_labeled(k.visibility);
    flat.push_back(labeled ? finite(k.x, "keypoint") : 0.0);
    flat.push_back(labeled ? finite(k.y, "keypoint") : 0.0);
    flat.push_back(static_cast<int>(k.visibility));
  }
  return flat;
}

Pose pose_from(const json& flat, const json* scores) {
  array(flat, "keypoints");
  if (flat.size() % 3 != 0) schema_error("keypoints length must be a multiple of 3");
  Pose pose;
  const std::size_t k = flat.size() / 3;
  if (scores && (!scores->is_array() || scores->size() != k)) {
    schema_error("keypoint_scores must hold one number per keypoint");
  }
  for (std::size_t i = 0; i < k; ++i) {
    Keypoint kp;
    kp.x = number(flat[3 * i], "keypoint x");
    kp.y = number(flat[3 * i + 1], "keypoint y");
    const int v = integer(flat[3 * i + 2], "keypoint visibility");
    if (v < 0 || v > 2) schema_error("keypoint visibility must be 0, 1 or 2");
    kp.visibility = static_cast<Visibility>(v);
    if (scores) kp.score = number((*scores)[i], "keypoint score");
    pose.keypoints.push_back(kp);
  }
  return pose;
}

}  // namespace

json instances_to_json(const std::vector<InstanceFrame>& frames) {
  json out_frames = json::array();
  for (const InstanceFrame& f : frames) {
    json instances = json::array();
    for (const InstanceRecord& r : f.instances) {
      const ScoredInstance& s = r.instance;
      json inst;
      inst["box"] = box_array(s.box);
      inst["box_score"] = finite(s.box_score, "box_score");
      inst["pose_score"] = finite(s.pose_score, "pose_score");
      inst["final_score"] = finite(s.final_score, "final_score");
      inst["keypoints"] = keypoints_to_json(s.pose);
      json scores = json::array();
      for (const Keypoint& k : s.pose.keypoints) scores.push_back(finite(k.score, "keypoint score"));
      inst["keypoint_scores"] = std::move(scores);
      if (r.track_id) inst["track_id"] = *r.track_id;
      if (r.embedding) {
        for (float v : *r.embedding) finite(v, "embedding");
        inst["embedding"] = *r.embedding;
      }
      instances.push_back(std::move(inst));
    }
    out_frames.push_back({{"frame_id", f.frame_id}, {"instances", std::move(instances)}});
  }
  return {{"schema_version", kSchemaVersion}, {"frames", std::move(out_frames)}};
}

std::vector<InstanceFrame> instances_from_json(const json& doc) {
  check_version(doc);
  std::vector<InstanceFrame> frames;
  std::optional<std::size_t> num_keypoints;
  for (const json& jf : array(field(doc, "frames"), "frames")) {
    InstanceFrame f;
    f.frame_id = integer(field(jf, "frame_id"), "frame_id");
    for (const json& ji : array(field(jf, "instances"), "instances")) {
      InstanceRecord r;
      ScoredInstance& s = r.instance;
      s.box = box_from(field(ji, "box"));
      s.box_score = number(field(ji, "box_score"), "box_score");
      s.pose_score = number(field(ji, "pose_score"), "pose_score");
      s.final_score = number(field(ji, "final_score"), "final_score");
      if (std::abs(s.final_score - s.box_score * s.pose_score) > 1e-9) {
        schema_error("final_score must equal box_score * pose_score");
      }
      s.box.score = s.box_score;
      const auto scores = ji.find("keypoint_scores");
      s.pose = pose_from(field(ji, "keypoints"), scores == ji.end() ? nullptr : &*scores);
      s.pose.pose_score = s.pose_score;
      if (num_keypoints && *num_keypoints != s.pose.size()) schema_error("keypoint counts differ");
      num_keypoints = s.pose.size();
      if (const auto t = ji.find("track_id"); t != ji.end()) r.track_id = integer(*t, "track_id");
      if (const auto e = ji.find("embedding"); e != ji.end()) {
        Embedding emb;
        for (const json& v : array(*e, "embedding")) emb.push_back(static_cast<float>(number(v, "embedding")));
        r.embedding = std::move(emb);
      }
      f.instances.push_back(std::move(r));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

json boxes_to_json(const std::vector<BoxFrame>& frames) {
  json out_frames = json::array();
  for (const BoxFrame& f : frames) {
    json boxes = json::array();
    for (const Box& b : f.boxes) boxes.push_back({{"box", box_array(b)}, {"score", finite(b.score, "score")}});
    out_frames.push_back({{"frame_id", f.frame_id}, {"boxes", std::move(boxes)}});
  }
  return {{"schema_version", kSchemaVersion}, {"frames", std::move(out_frames)}};
}

std::vector<BoxFrame> boxes_from_json(const json& doc) {
  check_version(doc);
  std::vector<BoxFrame> frames;
  for (const json& jf : array(field(doc, "frames"), "frames")) {
    BoxFrame f;
    f.frame_id = integer(field(jf, "frame_id"), "frame_id");
    for (const json& jb : array(field(jf, "boxes"), "boxes")) {
      Box b = box_from(field(jb, "box"));
      b.score = number(field(jb, "score"), "score");
      if (!(b.score >= 0.0 && b.score <= 1.0)) schema_error("box score outside [0,1]");
      f.boxes.push_back(b);
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchema, path.string() + ": " + e.what());
  }
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace ogn::io
