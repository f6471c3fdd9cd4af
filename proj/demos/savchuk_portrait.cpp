// Prints the dyadic orbit ball as Graphviz DOT, ray vertices boxed.
// Usage: savchuk_portrait [radius] > portrait.dot

#include <srw/plmap.hpp>
#include <srw/schreier.hpp>
#include <srw/action.hpp>

#include <cstdlib>
#include <iostream>

using namespace srw;

int main(int argc, char** argv) {
    long radius = argc > 1 ? std::atol(argv[1]) : 5;
    auto ball = orbit_ball<ThompsonAction>(dyadic(1, 1), radius);

    std::cerr << "ball of radius " << radius << " around 1/2: " << ball.vertices.size()
              << " vertices\n";
    for (long d = 0, i = 0; d <= radius; ++d) {
        long count = 0;
        while (i < long(ball.vertices.size()) && ball.distance[size_t(i)] == d) ++i, ++count;
        std::cerr << "  shell " << d << ": " << count << "\n";
    }

    std::cout << "digraph savchuk {\n  rankdir=LR;\n  node [fontsize=10];\n";
    for (size_t i = 0; i < ball.vertices.size(); ++i) {
        const auto& v = ball.vertices[i];
        std::cout << "  v" << i << " [label=\"" << dyadic_to_string(v) << "\""
                  << (hair_position(v) ? ", shape=box" : "") << "];\n";
    }
    // drop inverse-labeled arrows, they double every edge
    for (const auto& e : ball.edges) {
        const auto& label = ball.gens[e.gen].first;
        if (label.find('-') != std::string::npos) continue;
        std::cout << "  v" << e.src << " -> v" << e.dst << " [label=\"" << label << "\"];\n";
    }
    std::cout << "}\n";
    return 0;
}
