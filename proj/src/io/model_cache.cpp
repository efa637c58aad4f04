#include "mcgta/io/model_cache.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "mcgta/io/dataset_csv.hpp"
#include "mcgta/logging.hpp"

namespace mcgta::io {

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    return fnv1a64(std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

std::uint64_t hash_file(const std::filesystem::path& path) { return fnv1a64(read_file(path)); }

namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << "0x" << std::hex << v;
    return ss.str();
}

nlohmann::json header_json(const CacheHeader& h) {
    return {{"format_version", h.format_version},
            {"dataset_hash", hex64(h.dataset_hash)},
            {"n", h.n},
            {"d_f", h.dim},
            {"n_neighbors", h.n_neighbors},
            {"estimator", h.estimator},
            {"regularization", h.regularization},
            {"metric", h.metric}};
}

CacheHeader parse_header(const std::string& line) {
    try {
        const auto j = nlohmann::json::parse(line);
        CacheHeader h;
        h.format_version = j.at("format_version").get<int>();
        h.dataset_hash = std::stoull(j.at("dataset_hash").get<std::string>(), nullptr, 16);
        h.n = j.at("n").get<std::int64_t>();
        h.dim = j.at("d_f").get<std::int64_t>();
        h.n_neighbors = j.at("n_neighbors").get<std::int64_t>();
        h.estimator = j.at("estimator").get<std::string>();
        h.regularization = j.at("regularization").get<double>();
        h.metric = j.at("metric").get<std::string>();
        return h;
    } catch (const std::exception& e) {
        throw CacheCorrupt(std::string("model cache header unreadable: ") + e.what());
    }
}

void append_le(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<char>(bits & 0xff));
        bits >>= 8;
    }
}

double read_le(const char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(p[b]);
    return std::bit_cast<double>(bits);
}

std::pair<CacheHeader, std::size_t> split_file(const std::string& bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string::npos) throw CacheCorrupt("model cache has no header line");
    return {parse_header(bytes.substr(0, nl)), nl + 1};
}

}  // namespace

void cache_models(const std::filesystem::path& path, const CacheHeader& header, std::span<const FittedGaussian> models) {
    if (static_cast<std::int64_t>(models.size()) != header.n) throw InvalidInput("cache_models: header N mismatch");
    std::string out = header_json(header).dump() + "\n";
    const auto d = static_cast<Eigen::Index>(header.dim);
    out.reserve(out.size() + models.size() * static_cast<std::size_t>(d + d * d) * 8);
    for (const auto& m : models) {
        if (m.dim() != d || m.covariance.rows() != d || m.covariance.cols() != d) {
            throw InvalidInput("cache_models: model dimension mismatch");
        }
        for (Eigen::Index i = 0; i < d; ++i) append_le(out, m.mean[i]);
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) append_le(out, m.covariance(r, c));
        }
    }
    write_file_atomic(path, out);
}

CacheHeader read_cache_header(const std::filesystem::path& path) { return split_file(read_file(path)).first; }

std::optional<std::vector<FittedGaussian>> load_cached_models(const std::filesystem::path& path,
                                                              const CacheHeader& expected) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    const std::string bytes = read_file(path);
    const auto [header, offset] = split_file(bytes);
    if (header != expected) {
        warn("model cache '" + path.string() + "' does not match this dataset/configuration; refitting");
        return std::nullopt;
    }
    if (header.n < 0 || header.dim < 1) throw CacheCorrupt("model cache header has invalid sizes");
    const auto d = static_cast<Eigen::Index>(header.dim);
    const std::size_t per_model = static_cast<std::size_t>(d + d * d);
    const std::size_t want = static_cast<std::size_t>(header.n) * per_model * 8;
    if (bytes.size() - offset != want) {
        throw CacheCorrupt("model cache payload is " + std::to_string(bytes.size() - offset) + " bytes, expected " +
                           std::to_string(want));
    }
    std::vector<FittedGaussian> models;
    models.reserve(static_cast<std::size_t>(header.n));
    const char* p = bytes.data() + offset;
    for (std::int64_t k = 0; k < header.n; ++k) {
        FittedGaussian m{Eigen::VectorXd(d), Eigen::MatrixXd(d, d)};
        for (Eigen::Index i = 0; i < d; ++i, p += 8) m.mean[i] = read_le(p);
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c, p += 8) m.covariance(r, c) = read_le(p);
        }
        models.push_back(std::move(m));
    }
    return models;
}

}  // namespace mcgta::io
