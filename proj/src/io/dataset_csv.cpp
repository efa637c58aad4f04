#include "mcgta/io/dataset_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "mcgta/metric_space.hpp"

namespace mcgta::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) return out;
        start = comma + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

double parse_double(std::string_view cell, long row, std::string_view column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError("row " + std::to_string(row) + ": column '" + std::string(column) + "' is not a finite number: '" +
                             std::string(cell) + "'",
                         row);
    }
    return v;
}

int parse_int(std::string_view cell, long row, std::string_view column) {
    int v = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("row " + std::to_string(row) + ": column '" + std::string(column) + "' is not an integer: '" +
                             std::string(cell) + "'",
                         row);
    }
    return v;
}

// Finds columns prefix0, prefix1, ... in order; stops at the first gap.
std::vector<std::size_t> indexed_columns(const std::vector<std::string_view>& header, char prefix) {
    std::vector<std::size_t> out;
    for (;;) {
        const std::string name = prefix + std::to_string(out.size());
        std::size_t found = header.size();
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == name) found = c;
        }
        if (found == header.size()) return out;
        out.push_back(found);
    }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temporary file onto '" + path.string() + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

LoadedDataset parse_dataset(const std::string& text, MetricKind kind) {
    const auto lines = lines_of(text);
    std::size_t first = 0;
    while (first < lines.size() && blank(lines[first])) ++first;
    if (first == lines.size()) throw ParseError("dataset is empty (no header row)", 0);

    const auto header = split(lines[first]);
    const auto pos_cols = indexed_columns(header, 'p');
    const auto feat_cols = indexed_columns(header, 'f');
    std::optional<std::size_t> label_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "label") label_col = c;
    }
    if (feat_cols.empty()) throw ParseError("header has no feature columns (f0, f1, ...)", 0);
    const std::size_t known = pos_cols.size() + feat_cols.size() + (label_col ? 1 : 0);
    if (known != header.size()) throw ParseError("header has unrecognized columns", 0);

    const bool row_index_positions = pos_cols.empty() && kind == MetricKind::absolute_index;
    if (!row_index_positions) {
        const int want = metric_dims(kind);
        const auto have = static_cast<int>(pos_cols.size());
        if (want < 0 ? (have < 1 || have > 2) : have != want) {
            throw ParseError("header has " + std::to_string(have) + " position columns, metric " + to_string(kind) +
                                 " needs " + (want < 0 ? std::string("1 or 2") : std::to_string(want)),
                             0);
        }
    }

    LoadedDataset out;
    if (label_col) out.truth.emplace();
    long row = 0;
    for (std::size_t li = first + 1; li < lines.size(); ++li) {
        if (blank(lines[li])) continue;
        ++row;
        const auto cells = split(lines[li]);
        if (cells.size() != header.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                                 " columns, found " + std::to_string(cells.size()),
                             row);
        }
        Observation obs;
        obs.features.resize(static_cast<Eigen::Index>(feat_cols.size()));
        for (std::size_t f = 0; f < feat_cols.size(); ++f) {
            obs.features[static_cast<Eigen::Index>(f)] = parse_double(cells[feat_cols[f]], row, header[feat_cols[f]]);
        }
        if (row_index_positions) {
            obs.position.resize(1);
            obs.position[0] = double(row - 1);
        } else {
            obs.position.resize(static_cast<Eigen::Index>(pos_cols.size()));
            for (std::size_t p = 0; p < pos_cols.size(); ++p) {
                obs.position[static_cast<Eigen::Index>(p)] = parse_double(cells[pos_cols[p]], row, header[pos_cols[p]]);
            }
            if (kind == MetricKind::geodesic && (std::abs(obs.position[0]) > 180.0 || std::abs(obs.position[1]) > 90.0)) {
                throw ParseError("row " + std::to_string(row) + ": longitude/latitude out of range", row);
            }
        }
        if (label_col) out.truth->push_back(parse_int(cells[*label_col], row, "label"));
        out.observations.push_back(std::move(obs));
    }
    return out;
}

LoadedDataset load_dataset(const std::filesystem::path& path, MetricKind kind) {
    return parse_dataset(read_file(path), kind);
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset, const std::optional<std::vector<int>>& truth) {
    if (truth && truth->size() != dataset.size()) throw InvalidInput("save_dataset: label count mismatch");
    if (dataset.empty()) throw InvalidInput("save_dataset: empty dataset");
    const Eigen::Index dm = dataset.front().position.size();
    const Eigen::Index df = dataset.front().features.size();
    std::string s;
    for (Eigen::Index p = 0; p < dm; ++p) s += "p" + std::to_string(p) + ",";
    for (Eigen::Index f = 0; f < df; ++f) s += (f ? ",f" : "f") + std::to_string(f);
    if (truth) s += ",label";
    s += '\n';
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& obs = dataset[i];
        if (obs.position.size() != dm || obs.features.size() != df) throw InvalidInput("save_dataset: ragged dataset");
        for (Eigen::Index p = 0; p < dm; ++p) s += format_double(obs.position[p]) + ",";
        for (Eigen::Index f = 0; f < df; ++f) s += (f ? "," : "") + format_double(obs.features[f]);
        if (truth) s += "," + std::to_string((*truth)[i]);
        s += '\n';
    }
    write_file_atomic(path, s);
}

void save_labels(const std::filesystem::path& path, const ClusterAssignment& assignment) {
    std::string s = "index,label\n";
    for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
        s += std::to_string(i) + "," + std::to_string(assignment.labels[i]) + "\n";
    }
    write_file_atomic(path, s);
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const auto lines = lines_of(text);
    std::size_t first = 0;
    while (first < lines.size() && blank(lines[first])) ++first;
    if (first == lines.size()) throw ParseError("label file is empty (no header row)", 0);
    const auto header = split(lines[first]);
    std::optional<std::size_t> col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "label") col = c;
    }
    if (!col) throw ParseError("label file has no 'label' column", 0);
    std::vector<int> out;
    long row = 0;
    for (std::size_t li = first + 1; li < lines.size(); ++li) {
        if (blank(lines[li])) continue;
        ++row;
        const auto cells = split(lines[li]);
        if (cells.size() != header.size()) throw ParseError("row " + std::to_string(row) + ": wrong column count", row);
        out.push_back(parse_int(cells[*col], row, "label"));
    }
    return out;
}

std::filesystem::path variogram_sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    return p.replace_extension(".json");
}

std::filesystem::path dump_variogram(const std::filesystem::path& path, const EmpiricalVariogram& emp,
                                     const TheoreticalVariogram& tv) {
    std::string s = "bin_center,count,empirical_semivariance,theoretical_value\n";
    for (Eigen::Index k = 0; k < emp.size(); ++k) {
        s += format_double(emp.bin_centers[k]) + "," + std::to_string(emp.counts[static_cast<std::size_t>(k)]) + ",";
        if (!emp.empty_bin(k)) s += format_double(emp.semivariances[k]);
        s += "," + format_double(eval_theoretical(tv, emp.bin_centers[k])) + "\n";
    }
    write_file_atomic(path, s);

    const nlohmann::json side = {{"nugget", tv.nugget},
                                 {"sill", tv.sill},
                                 {"range", tv.range},
                                 {"family", to_string(tv.family)},
                                 {"bin_half_width", emp.bin_half_width}};
    const auto side_path = variogram_sidecar_path(path);
    write_file_atomic(side_path, side.dump(2) + "\n");
    return side_path;
}

TheoreticalVariogram load_variogram_sidecar(const std::filesystem::path& json_path) {
    try {
        const auto j = nlohmann::json::parse(read_file(json_path));
        TheoreticalVariogram tv;
        tv.nugget = j.at("nugget").get<double>();
        tv.sill = j.at("sill").get<double>();
        tv.range = j.at("range").get<double>();
        tv.family = family_from_string(j.at("family").get<std::string>());
        return tv;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(json_path.string() + ": " + e.what(), 0);
    }
}

}  // namespace mcgta::io
