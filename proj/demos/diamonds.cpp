// Round trip between plain increasing trees, 2-bucket trees and increasing diamonds.
#include <bucket_trees/bijections.hpp>

#include <iostream>

int main() {
  using namespace bucket_trees;
  const auto plain = parse_tree("{1}({2}({4},{5}),{3}({6}))", 1);
  const auto bucket = cluster(plain, 2);
  const auto diamond = bucket_to_diamond(bucket);
  std::cout << "plain    " << to_text(plain) << "\n"
            << "bucket   " << to_text(bucket) << "\n"
            << "diamond  " << to_text(diamond) << "\n"
            << "back     " << to_text(diamond_to_bucket(diamond)) << "\n"
            << "inner nodes " << diamond.inner_count() << ", capacity-one buckets "
            << census(bucket).unsaturated_count(1) << "\n";
}
