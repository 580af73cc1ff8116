#include "lans/output.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "lans/error.hpp"

namespace lans {

namespace {

constexpr char snapshot_magic[8] = {'L', 'A', 'N', 'S', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t snapshot_version = 1;

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        std::reverse(b, b + sizeof(T));
        std::memcpy(&v, b, sizeof(T));
        return v;
    }
}

template <class T>
void put(std::ostream& os, T v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("truncated snapshot");
    return to_little(v);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw Error("cannot write " + path.string());
    return os;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw InvalidArgument("row width differs from the header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_text(const CsvTable& t) {
    if (t.units.size() != t.columns.size()) throw InvalidArgument("one unit label per column");
    std::ostringstream os;
    os << "# units:";
    for (std::size_t c = 0; c < t.units.size(); ++c) os << (c ? ", " : " ") << t.columns[c] << " [" << t.units[c] << "]";
    os << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_double(r[c]);
        os << '\n';
    }
    return os.str();
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    auto os = open_out(path);
    os << csv_text(table);
    if (!os) throw Error("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            // "# units: a [u], b [v]"
            const auto colon = line.find(':');
            std::stringstream ss(line.substr(colon == std::string::npos ? 1 : colon + 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto lb = item.find('['), rb = item.rfind(']');
                if (lb != std::string::npos && rb != std::string::npos) t.units.push_back(item.substr(lb + 1, rb - lb - 1));
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (r.ec != std::errc() || r.ptr != cell.data() + cell.size()) throw Error("bad number '" + cell + "' in " + path.string());
            row.push_back(v);
        }
        t.add_row(std::move(row));
    }
    return t;
}

std::string svg_text(const PlotSpec& plot) {
    const double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
    const auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
    const auto ty = [&](double v) { return plot.log_y ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series)
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            if ((plot.log_x && !(s.x[k] > 0)) || (plot.log_y && !(s.y[k] > 0))) continue;
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            x0 = std::min(x0, tx(s.x[k]));
            x1 = std::max(x1, tx(s.x[k]));
            y0 = std::min(y0, ty(s.y[k]));
            y1 = std::max(y1, ty(s.y[k]));
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * (width - left - right); };
    const auto py = [&](double v) { return height - bottom - (ty(v) - y0) / (y1 - y0) * (height - top - bottom); };
    const auto label = [](double v, bool log) { return short_number(log ? std::pow(10.0, v) : v); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(plot.title)
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
       << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\">" << label(x0, plot.log_x) << "</text>\n";
    os << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"end\">"
       << label(x1, plot.log_x) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << height - bottom << "\" text-anchor=\"end\">" << label(y0, plot.log_y)
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << label(y1, plot.log_y)
       << "</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
       << escape_xml(plot.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << height / 2
       << ")\">" << escape_xml(plot.y_label) << "</text>\n";
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const auto& ser = plot.series[s];
        const char* color = colors[s % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < std::min(ser.x.size(), ser.y.size()); ++k) {
            if ((plot.log_x && !(ser.x[k] > 0)) || (plot.log_y && !(ser.y[k] > 0))) continue;
            if (!std::isfinite(ser.x[k]) || !std::isfinite(ser.y[k])) continue;
            os << short_number(px(ser.x[k])) << ',' << short_number(py(ser.y[k])) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - right - 6 << "\" y=\"" << top + 16 + 14 * s << "\" text-anchor=\"end\" fill=\""
           << color << "\">" << escape_xml(ser.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::filesystem::path& path, const PlotSpec& plot) {
    auto os = open_out(path);
    os << svg_text(plot);
    if (!os) throw Error("write failed: " + path.string());
}

Snapshot snapshot_of(const SpectralState& state) {
    const SpectralGrid& g = *state.grid;
    Snapshot s;
    s.dimension = static_cast<std::uint32_t>(g.dimension());
    s.n = static_cast<std::uint32_t>(g.n());
    s.components = static_cast<std::uint32_t>(state.u.size());
    s.time = state.t;
    for (const auto& c : g.backward(state.u)) s.data.insert(s.data.end(), c.begin(), c.end());
    return s;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    std::size_t expect = snap.components;
    for (std::uint32_t k = 0; k < snap.dimension; ++k) expect *= snap.n;
    if (snap.data.size() != expect) throw InvalidArgument("snapshot data size does not match its header");
    auto os = open_out(path, true);
    os.write(snapshot_magic, sizeof snapshot_magic);
    put(os, snapshot_version);
    put(os, snap.dimension);
    put(os, snap.n);
    put(os, snap.components);
    put(os, snap.time);
    for (double v : snap.data) put(os, v);
    if (!os) throw Error("write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot read " + path.string());
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, snapshot_magic, sizeof magic) != 0) throw Error("not a snapshot file");
    if (get<std::uint32_t>(is) != snapshot_version) throw Error("unsupported snapshot version");
    Snapshot s;
    s.dimension = get<std::uint32_t>(is);
    s.n = get<std::uint32_t>(is);
    s.components = get<std::uint32_t>(is);
    s.time = get<double>(is);
    if (s.dimension < 1 || s.dimension > 3) throw Error("bad snapshot dimension");
    std::size_t count = s.components;
    for (std::uint32_t k = 0; k < s.dimension; ++k) count *= s.n;
    s.data.resize(count);
    for (auto& v : s.data) v = get<double>(is);
    return s;
}

} // namespace lans
