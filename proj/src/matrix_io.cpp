#include "framec/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace framec {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool looks_complex(std::string_view field) {
    if (field.find_first_of("j[]()") != std::string_view::npos) {
        return true;
    }
    const auto i = field.find('i');
    // "inf" and "infinity" are real (and later rejected as non-finite).
    return i != std::string_view::npos && field.substr(i, 3) != "inf";
}

double parse_number(std::string_view field, std::size_t line) {
    field = trim(field);
    if (looks_complex(field)) {
        throw Error(ErrorKind::MixedField, "line " + std::to_string(line) + ": '" + std::string(field) +
                                               "' looks complex; complex entries are only accepted in JSON");
    }
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": '" + std::string(field) +
                                               "' is not a decimal number");
    }
    return v;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double json_real(const nlohmann::json& v) {
    if (!v.is_number()) {
        throw Error(ErrorKind::ParseError, "matrix entry " + v.dump() + " is not a number");
    }
    return v.get<double>();
}

} // namespace

MatrixFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? MatrixFormat::Json : MatrixFormat::Csv;
}

AnyMat parse_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        const std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parse_number(rest.substr(0, comma), line_no));
            if (comma == std::string_view::npos) {
                break;
            }
            rest = rest.substr(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                                   " entries, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorKind::ParseError, "empty matrix");
    }
    Mat<double> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    require_finite(m, "matrix");
    return m;
}

AnyMat parse_matrix_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
        throw Error(ErrorKind::ParseError, "matrix JSON needs rows, cols and data");
    }
    const auto& rows_v = j.at("rows");
    const auto& cols_v = j.at("cols");
    const auto& data = j.at("data");
    if (!rows_v.is_number_unsigned() || !cols_v.is_number_unsigned() || !data.is_array()) {
        throw Error(ErrorKind::ParseError, "rows/cols must be nonnegative integers and data an array");
    }
    const auto rows = rows_v.get<Index>();
    const auto cols = cols_v.get<Index>();
    if (rows < 1 || cols < 1 || static_cast<Index>(data.size()) != rows * cols) {
        throw Error(ErrorKind::ParseError, "data holds " + std::to_string(data.size()) + " entries for a " +
                                               std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    bool complex = false;
    for (const auto& v : data) {
        complex = complex || v.is_array();
    }
    auto fill = [&](auto& m, auto&& entry) {
        for (Index i = 0; i < rows; ++i) {
            for (Index c = 0; c < cols; ++c) {
                m(i, c) = entry(data[static_cast<std::size_t>(i * cols + c)]);
            }
        }
    };
    if (!complex) {
        Mat<double> m(rows, cols);
        fill(m, json_real);
        require_finite(m, "matrix");
        return m;
    }
    Mat<Complex> m(rows, cols);
    fill(m, [](const nlohmann::json& v) {
        if (v.is_array()) {
            if (v.size() != 2) {
                throw Error(ErrorKind::ParseError, "complex entry must be [re, im]");
            }
            return Complex(json_real(v[0]), json_real(v[1]));
        }
        return Complex(json_real(v), 0.0);
    });
    require_finite(m, "matrix");
    return m;
}

AnyMat read_matrix(const std::filesystem::path& path, MatrixFormat format) {
    const std::string text = slurp(path);
    if (format == MatrixFormat::Csv) {
        return parse_csv(text);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    return parse_matrix_json(j);
}

AnyMat read_matrix(const std::filesystem::path& path) { return read_matrix(path, format_for_path(path)); }

Mat<Complex> to_complex(const AnyMat& m) {
    return std::visit([](const auto& x) -> Mat<Complex> { return x.template cast<Complex>(); }, m);
}

template <Field T>
nlohmann::json matrix_to_json(const Mat<T>& m) {
    nlohmann::json data = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if constexpr (std::same_as<T, double>) {
                data.push_back(m(i, j));
            } else {
                data.push_back({m(i, j).real(), m(i, j).imag()});
            }
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

template nlohmann::json matrix_to_json<double>(const Mat<double>&);
template nlohmann::json matrix_to_json<Complex>(const Mat<Complex>&);

nlohmann::json matrix_to_json(const AnyMat& m) {
    return std::visit([](const auto& x) { return matrix_to_json(x); }, m);
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string to_csv(const AnyMat& m) {
    if (is_complex(m)) {
        throw Error(ErrorKind::MixedField, "CSV output is real-only; use JSON for complex matrices");
    }
    const auto& r = std::get<Mat<double>>(m);
    std::string out;
    for (Index i = 0; i < r.rows(); ++i) {
        for (Index j = 0; j < r.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_double(r(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string serialize_matrix(const AnyMat& m, MatrixFormat format) {
    return format == MatrixFormat::Csv ? to_csv(m) : matrix_to_json(m).dump() + "\n";
}

void write_matrix(const std::filesystem::path& path, const AnyMat& m, MatrixFormat format) {
    const std::string text = serialize_matrix(m, format);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::ParseError, "cannot write " + path.string());
    }
}

void write_matrix(const std::filesystem::path& path, const AnyMat& m) {
    write_matrix(path, m, format_for_path(path));
}

} // namespace framec
