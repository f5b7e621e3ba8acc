#include "alpos/checkpoint.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "alpos/errors.hpp"

namespace alpos {
namespace {

constexpr char kMagic[8] = {'A', 'L', 'P', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
}

void put_f64(std::vector<char>& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i)
        buf.push_back(static_cast<char>(bits >> (8 * i)));
}

struct Reader {
    const std::vector<char>& buf;
    std::size_t pos = 0;

    std::uint32_t u32() {
        if (pos + 4 > buf.size()) throw CorruptFile("checkpoint truncated");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(buf[pos + i]))
                 << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        if (pos + 8 > buf.size()) throw CorruptFile("checkpoint truncated");
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(buf[pos + i]))
                    << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

}  // namespace

void save_checkpoint(const Model& model, const Normalizer& normalizer,
                     const std::string& path) {
    std::vector<char> buf;
    buf.insert(buf.end(), kMagic, kMagic + 8);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(model.arch.input_dim));
    put_u32(buf, static_cast<std::uint32_t>(model.arch.hidden_width));
    put_u32(buf, static_cast<std::uint32_t>(model.arch.n_hidden));
    put_u32(buf, static_cast<std::uint32_t>(model.arch.output_dim));
    put_u32(buf, static_cast<std::uint32_t>(normalizer.feature_means.size()));
    for (int i = 0; i < normalizer.feature_means.size(); ++i)
        put_f64(buf, normalizer.feature_means(i));
    for (int i = 0; i < normalizer.feature_stds.size(); ++i)
        put_f64(buf, normalizer.feature_stds(i));
    put_f64(buf, normalizer.position_center.x());
    put_f64(buf, normalizer.position_center.y());
    put_f64(buf, normalizer.position_half_extent.x());
    put_f64(buf, normalizer.position_half_extent.y());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const auto& w = model.weights[l];
        for (Eigen::Index i = 0; i < w.size(); ++i) put_f64(buf, w.data()[i]);
        const auto& b = model.biases[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) put_f64(buf, b(i));
    }
    const std::uint32_t checksum = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(buf.data()),
              static_cast<uInt>(buf.size())));
    put_u32(buf, checksum);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed for " + path);
}

std::pair<Model, Normalizer> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    if (buf.size() < 16) throw CorruptFile(path + ": too short");
    if (std::memcmp(buf.data(), kMagic, 8) != 0)
        throw CorruptFile(path + ": bad magic");

    const std::uint32_t stored_crc = [&] {
        Reader tail{buf, buf.size() - 4};
        return tail.u32();
    }();
    const std::uint32_t actual_crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(buf.data()),
              static_cast<uInt>(buf.size() - 4)));
    if (stored_crc != actual_crc)
        throw CorruptFile(path + ": checksum mismatch");

    Reader r{buf, 8};
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw VersionMismatch(path + ": checkpoint version " +
                              std::to_string(version));
    ModelArch arch;
    arch.input_dim = static_cast<int>(r.u32());
    arch.hidden_width = static_cast<int>(r.u32());
    arch.n_hidden = static_cast<int>(r.u32());
    arch.output_dim = static_cast<int>(r.u32());
    arch.validate();

    Normalizer norm;
    const std::uint32_t nf = r.u32();
    norm.feature_means.resize(nf);
    for (std::uint32_t i = 0; i < nf; ++i) norm.feature_means(i) = r.f64();
    norm.feature_stds.resize(nf);
    for (std::uint32_t i = 0; i < nf; ++i) norm.feature_stds(i) = r.f64();
    norm.position_center.x() = r.f64();
    norm.position_center.y() = r.f64();
    norm.position_half_extent.x() = r.f64();
    norm.position_half_extent.y() = r.f64();

    Model model;
    model.arch = arch;
    std::vector<std::pair<int, int>> shapes;
    shapes.emplace_back(arch.hidden_width, arch.input_dim);
    for (int l = 0; l < arch.n_hidden; ++l)
        shapes.emplace_back(arch.hidden_width, arch.hidden_width);
    shapes.emplace_back(arch.output_dim, arch.hidden_width);
    for (auto [rows, cols] : shapes) {
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = r.f64();
        Eigen::VectorXd b(rows);
        for (int i = 0; i < rows; ++i) b(i) = r.f64();
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    if (r.pos != buf.size() - 4)
        throw CorruptFile(path + ": trailing bytes");
    return {std::move(model), std::move(norm)};
}

}  // namespace alpos
