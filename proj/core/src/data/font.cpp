#include "hcn/data/font.hpp"

#include <array>
#include <stdexcept>

namespace hcn::data {

namespace {

using G = std::vector<std::string>;

const std::array<G, 26>& glyphs() {
  static const std::array<G, 26> table{{
      {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"},  // A
      {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."},  // B
      {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."},  // C
      {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."},  // D
      {"#####", "#....", "#....", "####.", "#....", "#....", "#####"},  // E
      {"#####", "#....", "#....", "####.", "#....", "#....", "#...."},  // F
      {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".###."},  // G
      {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"},  // H
      {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."},  // I
      {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."},  // J
      {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"},  // K
      {"#....", "#....", "#....", "#....", "#....", "#....", "#####"},  // L
      {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"},  // M
      {"#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"},  // N
      {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."},  // O
      {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."},  // P
      {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"},  // Q
      {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"},  // R
      {".####", "#....", "#....", ".###.", "....#", "....#", "####."},  // S
      {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."},  // T
      {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."},  // U
      {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."},  // V
      {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."},  // W
      {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"},  // X
      {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."},  // Y
      {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"},  // Z
  }};
  return table;
}

}  // namespace

const std::vector<std::string>& font_glyph(char c) {
  if (c < 'A' || c > 'Z') throw std::invalid_argument(std::string("no glyph for '") + c + "'");
  return glyphs()[static_cast<std::size_t>(c - 'A')];
}

}  // namespace hcn::data
