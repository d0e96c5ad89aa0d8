#ifndef MLSA_IO_HPP
#define MLSA_IO_HPP

#include <string>
#include <vector>

namespace mlsa::io {

/// Whitespace-delimited numeric rows. Blank lines and text after '#' are ignored.
std::vector<std::vector<double>> parse_matrix(const std::string& text);
std::vector<std::vector<double>> read_matrix(const std::string& path);

/// One row per line, values printed with %.17g.
std::string format_matrix(const std::vector<std::vector<double>>& rows);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// %.17g, so the value round-trips.
std::string format_double(double v);

}  // namespace mlsa::io

#endif  // MLSA_IO_HPP
