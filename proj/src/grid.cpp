#include "urplan/grid.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace urplan {

std::string to_string(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("grid dimensions must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

ProbGrid::ProbGrid(int width, int height, double fill)
    : ProbGrid(width, height,
               std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                       static_cast<std::size_t>(std::max(height, 0)),
                                   fill)) {}

ProbGrid::ProbGrid(int width, int height, std::vector<double> probs)
    : shape_{width, height}, probs_(std::move(probs)) {
  check_dims(width, height);
  if (probs_.size() != shape_.size()) {
    throw std::invalid_argument("probability array has " + std::to_string(probs_.size()) +
                                " values, expected " + std::to_string(shape_.size()));
  }
  for (double p : probs_) {
    if (!valid_probability(p)) {
      throw std::invalid_argument("probability outside [0,1]: " + std::to_string(p));
    }
  }
}

void ProbGrid::set(Cell c, double p) {
  if (!valid_probability(p)) {
    throw std::invalid_argument("probability outside [0,1]: " + std::to_string(p));
  }
  probs_[shape_.index(c)] = p;
}

ProbGrid ProbGrid::with_floor(double floor) const {
  ProbGrid out = *this;
  for (double& p : out.probs_) p = std::max(p, floor);
  return out;
}

GroundTruthMask::GroundTruthMask(int width, int height, Label fill)
    : shape_{width, height} {
  check_dims(width, height);
  labels_.assign(shape_.size(), fill);
}

GroundTruthMask::GroundTruthMask(int width, int height, std::vector<Label> labels)
    : shape_{width, height}, labels_(std::move(labels)) {
  check_dims(width, height);
  if (labels_.size() != shape_.size()) {
    throw std::invalid_argument("label array size mismatch");
  }
}

// ---------------------------------------------------------------------------

namespace {

enum class MapFormat { Pgm, Png, Csv };

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapIoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MapFormat detect_format(const std::string& bytes) {
  static constexpr std::array<unsigned char, 8> kPngSig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= kPngSig.size() &&
      std::equal(kPngSig.begin(), kPngSig.end(), bytes.begin(),
                 [](unsigned char a, char b) { return a == static_cast<unsigned char>(b); })) {
    return MapFormat::Png;
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
    return MapFormat::Pgm;
  }
  return MapFormat::Csv;
}

// Minimal PGM header tokenizer: whitespace separated, '#' starts a comment.
class PgmReader {
 public:
  PgmReader(const std::string& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  int next_int() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    int v = 0;
    std::from_chars(bytes_.data() + start, bytes_.data() + pos_, v);
    return v;
  }

  // Exactly one whitespace byte separates the header from P5 raster data.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      fail("malformed header");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  const std::string& bytes() const { return bytes_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw MapIoError(path_.string() + ": " + what);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::filesystem::path path_;
  std::size_t pos_ = 2;
};

ProbGrid parse_pgm(const std::string& bytes, const std::filesystem::path& path) {
  const bool binary = bytes[1] == '5';
  PgmReader rd(bytes, path);
  const int width = rd.next_int();
  const int height = rd.next_int();
  const int maxval = rd.next_int();
  if (width <= 0 || height <= 0) rd.fail("zero-sized image");
  if (maxval <= 0 || maxval > 255) rd.fail("only 8-bit grayscale PGM is supported");

  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> probs(n);
  if (binary) {
    rd.skip_single_space();
    if (bytes.size() - rd.pos() < n) rd.fail("truncated raster");
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<unsigned char>(bytes[rd.pos() + i]);
      if (v > maxval) rd.fail("pixel exceeds maxval");
      probs[i] = static_cast<double>(v) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = rd.next_int();
      if (v > maxval) rd.fail("pixel exceeds maxval");
      probs[i] = static_cast<double>(v) / maxval;
    }
  }
  return ProbGrid(width, height, std::move(probs));
}

ProbGrid parse_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw MapIoError(path.string() + ": " + image.message);
  }
  if ((image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_LINEAR)) != 0) {
    png_image_free(&image);
    throw MapIoError(path.string() + ": only 8-bit grayscale PNG is supported");
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw MapIoError(path.string() + ": zero-sized image");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<unsigned char> raster(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
    throw MapIoError(path.string() + ": " + image.message);
  }
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<double> probs(raster.size());
  std::transform(raster.begin(), raster.end(), probs.begin(),
                 [](unsigned char v) { return static_cast<double>(v) / 255.0; });
  return ProbGrid(width, height, std::move(probs));
}

ProbGrid parse_csv(const std::string& text, const std::filesystem::path& path) {
  std::vector<double> probs;
  int width = -1;
  int height = 0;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    int cols = 0;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        throw MapIoError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" +
                         field + "'");
      }
      if (field.find_first_not_of(" \t", used) != std::string::npos) {
        throw MapIoError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" +
                         field + "'");
      }
      if (!valid_probability(v)) {
        throw MapIoError(path.string() + ":" + std::to_string(line_no) +
                         ": value outside [0,1]: " + field);
      }
      probs.push_back(v);
      ++cols;
    }
    if (width < 0) {
      width = cols;
    } else if (cols != width) {
      throw MapIoError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    ++height;
  }
  if (height == 0 || width <= 0) throw MapIoError(path.string() + ": zero-sized grid");
  return ProbGrid(width, height, std::move(probs));
}

unsigned char to_byte(double p) {
  return static_cast<unsigned char>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0));
}

void write_pgm_bytes(int width, int height, const std::vector<unsigned char>& raster,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MapIoError("cannot write " + path.string());
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) throw MapIoError("write failed: " + path.string());
}

}  // namespace

ProbGrid load_prob_grid(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.empty()) throw MapIoError(path.string() + ": empty file");
  switch (detect_format(bytes)) {
    case MapFormat::Pgm:
      return parse_pgm(bytes, path);
    case MapFormat::Png:
      return parse_png(path);
    case MapFormat::Csv:
      break;
  }
  return parse_csv(bytes, path);
}

GroundTruthMask threshold_mask(const ProbGrid& grid, double threshold) {
  std::vector<Label> labels(grid.values().size());
  std::transform(grid.values().begin(), grid.values().end(), labels.begin(), [&](double p) {
    return p >= threshold ? Label::Traversable : Label::Blocked;
  });
  return GroundTruthMask(grid.width(), grid.height(), std::move(labels));
}

GroundTruthMask load_gt_mask(const std::filesystem::path& path, double threshold) {
  return threshold_mask(load_prob_grid(path), threshold);
}

void require_same_shape(const GridShape& map, const GridShape& mask, const std::string& what) {
  if (map == mask) return;
  throw MapIoError(what + ": dimension mismatch, map is " + std::to_string(map.width) + "x" +
                   std::to_string(map.height) + " but mask is " + std::to_string(mask.width) +
                   "x" + std::to_string(mask.height));
}

void save_pgm(const ProbGrid& grid, const std::filesystem::path& path) {
  std::vector<unsigned char> raster(grid.values().size());
  std::transform(grid.values().begin(), grid.values().end(), raster.begin(), to_byte);
  write_pgm_bytes(grid.width(), grid.height(), raster, path);
}

void save_pgm(const GroundTruthMask& mask, const std::filesystem::path& path) {
  std::vector<unsigned char> raster(mask.labels().size());
  std::transform(mask.labels().begin(), mask.labels().end(), raster.begin(),
                 [](Label l) { return l == Label::Traversable ? 255 : 0; });
  write_pgm_bytes(mask.width(), mask.height(), raster, path);
}

void save_csv(const ProbGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MapIoError("cannot write " + path.string());
  out.precision(17);
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (c) out << ',';
      out << grid.at({r, c});
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

// Coverage of output bin i over input cells along one axis: the output bin
// spans [i*in/out, (i+1)*in/out) in input units.
struct AxisWeights {
  std::vector<std::vector<std::pair<int, double>>> bins;
};

AxisWeights axis_weights(int in, int out) {
  AxisWeights w;
  w.bins.resize(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    const double lo = i * scale;
    const double hi = (i + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(in - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int k = first; k <= last; ++k) {
      const double overlap = std::min(hi, k + 1.0) - std::max(lo, static_cast<double>(k));
      if (overlap > 0.0) w.bins[static_cast<std::size_t>(i)].emplace_back(k, overlap);
    }
  }
  return w;
}

}  // namespace

ProbGrid resample(const ProbGrid& grid, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resample: output dims must be >= 1");
  if (out_w == grid.width() && out_h == grid.height()) return grid;

  const AxisWeights rows = axis_weights(grid.height(), out_h);
  const AxisWeights cols = axis_weights(grid.width(), out_w);
  std::vector<double> out(static_cast<std::size_t>(out_w) * static_cast<std::size_t>(out_h));
  for (int r = 0; r < out_h; ++r) {
    for (int c = 0; c < out_w; ++c) {
      double sum = 0.0;
      double area = 0.0;
      for (const auto& [ir, wr] : rows.bins[static_cast<std::size_t>(r)]) {
        for (const auto& [ic, wc] : cols.bins[static_cast<std::size_t>(c)]) {
          sum += wr * wc * grid.at({ir, ic});
          area += wr * wc;
        }
      }
      out[static_cast<std::size_t>(r) * static_cast<std::size_t>(out_w) +
          static_cast<std::size_t>(c)] = std::clamp(sum / area, 0.0, 1.0);
    }
  }
  return ProbGrid(out_w, out_h, std::move(out));
}

GroundTruthMask resample(const GroundTruthMask& mask, int out_w, int out_h) {
  std::vector<double> real(mask.labels().size());
  std::transform(mask.labels().begin(), mask.labels().end(), real.begin(),
                 [](Label l) { return l == Label::Traversable ? 1.0 : 0.0; });
  return threshold_mask(resample(ProbGrid(mask.width(), mask.height(), std::move(real)), out_w, out_h),
                        0.5);
}

}  // namespace urplan
