#include "pdgeo/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pdgeo/error.hpp"

namespace pdgeo {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Validates symmetry and positivity; index is 0-based in messages.
SpdPoint validated_point(const Matrix& m, std::size_t index, std::vector<std::string>& warnings)
{
    const std::size_t n = m.dim();
    double asym = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(m(i, j))) {
                throw InputError("point " + std::to_string(index) + ": non-finite entry");
            }
            asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
            scale = std::max(scale, std::abs(m(i, j)));
        }
    }
    if (asym > 1e-8 * std::max(1.0, scale)) {
        warnings.push_back("point " + std::to_string(index) + ": asymmetric by " + std::to_string(asym) +
                           ", replaced by (p + pT)/2");
    }
    const SymMatrix s = SymMatrix::from_dense(m);
    const SymEig e = sym_eig(s);
    const double min_ev = e.values.back();
    const double max_ev = e.values.front();
    if (!(min_ev > static_cast<double>(n) * 2.220446049250313e-16 * max_ev) || !(max_ev > 0.0)) {
        std::ostringstream os;
        os << "point " << index << " is not positive definite (min eigenvalue " << min_ev << ")";
        throw DomainError(os.str());
    }
    return SpdPoint(s);
}

double json_number(const json& v, const std::string& where)
{
    if (!v.is_number()) {
        throw InputError(where + ": expected a number");
    }
    return v.get<double>();
}

Matrix json_matrix(const json& v, std::size_t n, const std::string& where)
{
    if (!v.is_array() || v.size() != n) {
        throw InputError(where + ": expected " + std::to_string(n) + " rows");
    }
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!v[i].is_array() || v[i].size() != n) {
            throw InputError(where + ", row " + std::to_string(i) + ": expected " + std::to_string(n) + " entries");
        }
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = json_number(v[i][j], where);
        }
    }
    return m;
}

Vector json_vector(const json& v, std::size_t n, const std::string& where)
{
    if (!v.is_array() || v.size() != n) {
        throw InputError(where + ": expected " + std::to_string(n) + " entries");
    }
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = json_number(v[i], where);
    }
    return out;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

DataFormat resolve_format(const std::string& path, const std::string& name)
{
    if (name == "json") {
        return DataFormat::Json;
    }
    if (name == "csv") {
        return DataFormat::Csv;
    }
    if (!name.empty() && name != "auto") {
        throw InputError("unknown format '" + name + "' (expected json or csv)");
    }
    const auto dot_pos = path.rfind('.');
    const std::string ext = dot_pos == std::string::npos ? "" : path.substr(dot_pos + 1);
    if (ext == "csv") {
        return DataFormat::Csv;
    }
    if (ext == "json") {
        return DataFormat::Json;
    }
    throw InputError("cannot infer the format of '" + path + "'; pass --format json|csv");
}

Dataset load_dataset(const std::string& path, DataFormat format)
{
    const std::string text = read_file(path);
    return format == DataFormat::Json ? parse_dataset_json(text, path) : parse_dataset_csv(text, path);
}

Dataset parse_dataset_json(const std::string& text, const std::string& source)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("points")) {
        throw InputError(source + ": expected an object with \"n\" and \"points\"");
    }
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
        throw InputError(source + ": \"n\" must be a positive integer");
    }
    Dataset d;
    d.source = source;
    d.n = j["n"].get<std::size_t>();
    const json& pts = j["points"];
    if (!pts.is_array()) {
        throw InputError(source + ": \"points\" must be an array");
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Matrix m = json_matrix(pts[k], d.n, source + ": point " + std::to_string(k));
        d.points.push_back(validated_point(m, k, d.warnings));
    }
    if (j.contains("labels")) {
        const json& labels = j["labels"];
        if (!labels.is_array() || labels.size() != d.points.size()) {
            throw InputError(source + ": \"labels\" must have one string per point");
        }
        for (const auto& l : labels) {
            if (!l.is_string()) {
                throw InputError(source + ": labels must be strings");
            }
            d.labels.push_back(l.get<std::string>());
        }
    }
    return d;
}

Dataset parse_dataset_csv(const std::string& text, const std::string& source)
{
    Dataset d;
    d.source = source;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = source + ":" + std::to_string(line_no);
        if (!have_header) {
            if (line.rfind("n=", 0) != 0) {
                throw InputError(where + ": expected header line 'n=<dimension>'");
            }
            try {
                std::size_t used = 0;
                const long long n = std::stoll(line.substr(2), &used);
                if (n < 1 || used != line.size() - 2) {
                    throw std::invalid_argument("n");
                }
                d.n = static_cast<std::size_t>(n);
            } catch (const std::exception&) {
                throw InputError(where + ": malformed header '" + line + "'");
            }
            have_header = true;
            continue;
        }
        std::vector<double> values;
        std::istringstream fields(line);
        std::string field;
        std::size_t column = 0;
        while (std::getline(fields, field, ',')) {
            ++column;
            const std::string f = trim(field);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(f, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (f.empty() || used != f.size()) {
                throw InputError(where + ", column " + std::to_string(column) + ": not a number: '" + f + "'");
            }
            values.push_back(v);
        }
        const std::size_t expected = d.n * (d.n + 1) / 2;
        if (values.size() != expected) {
            throw InputError(where + ": expected " + std::to_string(expected) + " values, got " +
                             std::to_string(values.size()));
        }
        Matrix m(d.n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < d.n; ++i) {
            for (std::size_t j = i; j < d.n; ++j) {
                m(i, j) = values[k];
                m(j, i) = values[k];
                ++k;
            }
        }
        d.points.push_back(validated_point(m, d.points.size(), d.warnings));
    }
    if (!have_header) {
        throw InputError(source + ": empty file (missing 'n=<dimension>' header)");
    }
    return d;
}

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json matrix_to_json(const SymMatrix& m)
{
    return matrix_to_json(m.dense());
}

json hull_to_json(const BallHull& hull)
{
    json balls = json::array();
    for (const auto& hb : hull.horoballs) {
        const Horofunction& h = hb.ball.horofunction;
        balls.push_back({
            {"Q", matrix_to_json(h.flat().rotation())},
            {"a", h.direction()},
            {"sign", h.orientation() == Orientation::Plus ? "+" : "-"},
            {"level", hb.ball.level},
            {"provenance",
             {{"flat", hb.flat_index},
              {"chamber", hb.chamber},
              {"facet_vertices", hb.facet_vertices},
              {"perturbed", hb.perturbed}}},
        });
    }
    json j = {
        {"n", hull.n},
        {"epsilon", hull.epsilon},
        {"d_X", hull.d_x},
        {"origin_shift", matrix_to_json(hull.origin_shift.matrix())},
        {"origin_index", hull.origin_index ? json(*hull.origin_index) : json(nullptr)},
        {"grid_size", hull.grid.size()},
        {"horoballs", std::move(balls)},
    };
    return j;
}

BallHull hull_from_json(const json& j)
{
    try {
        BallHull hull;
        hull.n = j.at("n").get<std::size_t>();
        hull.epsilon = j.at("epsilon").get<double>();
        hull.d_x = j.at("d_X").get<double>();
        std::vector<std::string> warnings;
        hull.origin_shift = validated_point(json_matrix(j.at("origin_shift"), hull.n, "origin_shift"), 0, warnings);
        if (!j.at("origin_index").is_null()) {
            hull.origin_index = j.at("origin_index").get<std::size_t>();
        }
        for (const auto& b : j.at("horoballs")) {
            const std::string sign = b.at("sign").get<std::string>();
            if (sign != "+" && sign != "-") {
                throw InputError("horoball sign must be '+' or '-'");
            }
            Horofunction h(Flat(json_matrix(b.at("Q"), hull.n, "Q")), json_vector(b.at("a"), hull.n, "a"),
                           sign == "+" ? Orientation::Plus : Orientation::Minus);
            const json& prov = b.at("provenance");
            hull.horoballs.push_back({Horoball{std::move(h), b.at("level").get<double>()},
                                      prov.at("flat").get<std::size_t>(), prov.at("chamber").get<std::size_t>(),
                                      prov.at("facet_vertices").get<std::vector<std::size_t>>(),
                                      prov.at("perturbed").get<bool>()});
        }
        return hull;
    } catch (const json::exception& e) {
        throw InputError(std::string("hull JSON: ") + e.what());
    }
}

json center_to_json(const CenterResult& result)
{
    return {
        {"p_hat", matrix_to_json(result.point.matrix())},
        {"max_violation", result.max_violation},
        {"objective", result.objective},
        {"constraints_count", result.constraints_count},
        {"grid_size", result.grid_size},
        {"iterations", result.iterations},
        {"seed", result.seed},
    };
}

std::string dump_json(const json& j)
{
    return j.dump(2);
}

DiskCoordinates disk_coordinates(const SpdPoint& p)
{
    if (p.dim() != 2) {
        throw DomainError("disk_coordinates: defined for PD(2)");
    }
    const double log_det = p.log_det();
    const double s = std::exp(-0.5 * log_det);
    const double x = s * p(0, 0);
    const double y = s * p(1, 1);
    const double w = s * p(0, 1);
    const double u = 0.5 * (x + y);
    const double v = 0.5 * (x - y);
    return {log_det, v / (1.0 + u), w / (1.0 + u)};
}

void write_plot2(std::ostream& out, const Dataset& data, const BallHull* hull, std::size_t trace_samples)
{
    if (data.n != 2) {
        throw DomainError("plot2 needs a PD(2) dataset (got n = " + std::to_string(data.n) + ")");
    }
    out.precision(17);
    out << "kind,index,log_det,disk_x,disk_y\n";
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const auto c = disk_coordinates(data.points[i]);
        out << "point," << i << ',' << c.log_det << ',' << c.x << ',' << c.y << '\n';
    }
    if (hull == nullptr) {
        return;
    }
    if (hull->n != 2) {
        throw DomainError("plot2: hull dimension is not 2");
    }
    for (std::size_t k = 0; k < hull->horoballs.size(); ++k) {
        const Horofunction& h = hull->horoballs[k].ball.horofunction;
        const Vector& a = h.canonical_direction();
        const double y1 = -hull->horoballs[k].ball.level / (a[0] - a[1]);
        if (!(std::abs(y1) <= 30.0)) {
            continue;  // nearly scalar direction: the horosphere misses the plotted slice
        }
        const Vector f{std::exp(y1), std::exp(-y1)};
        for (std::size_t s = 0; s < trace_samples; ++s) {
            const double t = -0.5 * std::numbers::pi +
                             std::numbers::pi * (static_cast<double>(s) + 0.5) / static_cast<double>(trace_samples);
            Matrix nu = Matrix::identity(2);
            nu(0, 1) = std::tan(t);
            const SymMatrix local = congruence(h.canonical_rotation() * nu, SymMatrix::diagonal(f));
            DiskCoordinates c{};
            try {
                const SpdPoint p = translate_from_identity(hull->origin_shift, SpdPoint(local));
                c = disk_coordinates(p);
            } catch (const DomainError&) {
                continue;  // too ill-conditioned to represent; sits on the disk boundary anyway
            }
            out << "horosphere," << k << ',' << c.log_det << ',' << c.x << ',' << c.y << '\n';
        }
    }
}

}  // namespace pdgeo
