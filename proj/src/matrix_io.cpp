#include "muxnet/matrix_io.hpp"

#include "json.hpp"
#include "muxnet/error.hpp"

namespace muxnet {

std::string matrix_to_json(const Matrix& m) {
    return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"q", m.field().q()}, {"entries", m.entries()}}
        .dump();
}

Matrix matrix_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
        const Field f = Field::of_size(j.at("q").get<std::uint32_t>());
        auto entries = j.at("entries").get<std::vector<Symbol>>();
        if (entries.size() != rows * cols) throw ConfigError("matrix: entries length is not rows x cols");
        for (Symbol e : entries)
            if (e >= f.q()) throw ConfigError("matrix: entry " + std::to_string(e) + " outside the field");
        return Matrix(f, rows, cols, std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("matrix: ") + e.what());
    } catch (const InvalidField& e) {
        throw ConfigError(std::string("matrix: ") + e.what());
    }
}

}  // namespace muxnet
