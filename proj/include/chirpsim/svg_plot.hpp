#ifndef CHIRPSIM_SVG_PLOT_HPP
#define CHIRPSIM_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace chirpsim {

/// Minimal self-contained SVG line chart. No timestamps or randomness in the
/// output, so identical inputs give byte-identical files.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_series(std::string name, const std::vector<double>& x,
                    const std::vector<double>& y);

    std::string render() const;
    void write(const std::string& path) const;

private:
    struct Series {
        std::string name;
        std::vector<double> x, y;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

} // namespace chirpsim

#endif
