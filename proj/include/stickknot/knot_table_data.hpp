#pragma once

// Generated from data/knots8.txt; tests check the two stay identical.

namespace stickknot {

inline constexpr const char* kBundledKnotTable = R"KNOTS(# Prime knots through eight crossings (Rolfsen numbering).
# PD codes and chirality from the KnotInfo database.
# name;crossing_number;chirality;PD
3_1;3;chiral;X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]
4_1;4;amphichiral;X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]
5_1;5;chiral;X[2,8,3,7],X[4,10,5,9],X[6,2,7,1],X[8,4,9,3],X[10,6,1,5]
5_2;5;chiral;X[1,5,2,4],X[3,9,4,8],X[5,1,6,10],X[7,3,8,2],X[9,7,10,6]
6_1;6;chiral;X[1,7,2,6],X[3,10,4,11],X[5,3,6,2],X[7,1,8,12],X[9,4,10,5],X[11,9,12,8]
6_2;6;chiral;X[1,8,2,9],X[3,11,4,10],X[5,1,6,12],X[7,2,8,3],X[9,7,10,6],X[11,5,12,4]
6_3;6;amphichiral;X[4,2,5,1],X[8,4,9,3],X[12,9,1,10],X[10,5,11,6],X[6,11,7,12],X[2,8,3,7]
7_1;7;chiral;X[1,9,2,8],X[3,11,4,10],X[5,13,6,12],X[7,1,8,14],X[9,3,10,2],X[11,5,12,4],X[13,7,14,6]
7_2;7;chiral;X[2,10,3,9],X[4,14,5,13],X[6,12,7,11],X[8,2,9,1],X[10,8,11,7],X[12,6,13,5],X[14,4,1,3]
7_3;7;chiral;X[1,9,2,8],X[3,11,4,10],X[5,1,6,14],X[7,13,8,12],X[9,3,10,2],X[11,5,12,4],X[13,7,14,6]
7_4;7;chiral;X[2,10,3,9],X[4,12,5,11],X[6,14,7,13],X[8,4,9,3],X[10,2,11,1],X[12,8,13,7],X[14,6,1,5]
7_5;7;chiral;X[2,10,3,9],X[4,2,5,1],X[6,14,7,13],X[8,12,9,11],X[10,4,11,3],X[12,6,13,5],X[14,8,1,7]
7_6;7;chiral;X[1,13,2,12],X[3,9,4,8],X[5,1,6,14],X[7,10,8,11],X[9,3,10,2],X[11,6,12,7],X[13,5,14,4]
7_7;7;chiral;X[1,10,2,11],X[3,13,4,12],X[5,14,6,1],X[7,5,8,4],X[9,2,10,3],X[11,9,12,8],X[13,6,14,7]
8_1;8;chiral;X[1,9,2,8],X[3,7,4,6],X[5,12,6,13],X[7,3,8,2],X[9,1,10,16],X[11,15,12,14],X[13,4,14,5],X[15,11,16,10]
8_2;8;chiral;X[1,10,2,11],X[3,13,4,12],X[5,15,6,14],X[7,1,8,16],X[9,2,10,3],X[11,9,12,8],X[13,5,14,4],X[15,7,16,6]
8_3;8;amphichiral;X[6,2,7,1],X[14,10,15,9],X[10,5,11,6],X[12,3,13,4],X[4,11,5,12],X[2,13,3,14],X[16,8,1,7],X[8,16,9,15]
8_4;8;chiral;X[2,11,3,12],X[4,9,5,10],X[6,16,7,15],X[8,14,9,13],X[10,1,11,2],X[12,3,13,4],X[14,8,15,7],X[16,6,1,5]
8_5;8;chiral;X[1,7,2,6],X[3,9,4,8],X[5,12,6,13],X[7,3,8,2],X[9,15,10,14],X[11,1,12,16],X[13,4,14,5],X[15,11,16,10]
8_6;8;chiral;X[2,9,3,10],X[4,14,5,13],X[6,16,7,15],X[8,12,9,11],X[10,1,11,2],X[12,8,13,7],X[14,6,15,5],X[16,4,1,3]
8_7;8;chiral;X[2,9,3,10],X[4,14,5,13],X[6,15,7,16],X[8,1,9,2],X[10,5,11,6],X[12,4,13,3],X[14,12,15,11],X[16,7,1,8]
8_8;8;chiral;X[1,7,2,6],X[3,12,4,13],X[5,9,6,8],X[7,3,8,2],X[9,16,10,1],X[11,14,12,15],X[13,4,14,5],X[15,10,16,11]
8_9;8;amphichiral;X[6,2,7,1],X[14,8,15,7],X[10,3,11,4],X[2,13,3,14],X[12,5,13,6],X[4,11,5,12],X[16,10,1,9],X[8,16,9,15]
8_10;8;chiral;X[2,14,3,13],X[4,9,5,10],X[6,11,7,12],X[8,15,9,16],X[10,5,11,6],X[12,2,13,1],X[14,7,15,8],X[16,4,1,3]
8_11;8;chiral;X[1,10,2,11],X[3,13,4,12],X[5,15,6,14],X[7,1,8,16],X[9,2,10,3],X[11,9,12,8],X[13,7,14,6],X[15,5,16,4]
8_12;8;amphichiral;X[4,2,5,1],X[10,8,11,7],X[8,3,9,4],X[2,9,3,10],X[14,6,15,5],X[16,11,1,12],X[12,15,13,16],X[6,14,7,13]
8_13;8;chiral;X[1,9,2,8],X[3,14,4,15],X[5,12,6,13],X[7,11,8,10],X[9,3,10,2],X[11,16,12,1],X[13,4,14,5],X[15,6,16,7]
8_14;8;chiral;X[2,12,3,11],X[4,8,5,7],X[6,15,7,16],X[8,14,9,13],X[10,2,11,1],X[12,10,13,9],X[14,4,15,3],X[16,5,1,6]
8_15;8;chiral;X[1,7,2,6],X[3,15,4,14],X[5,9,6,8],X[7,3,8,2],X[9,13,10,12],X[11,1,12,16],X[13,5,14,4],X[15,11,16,10]
8_16;8;chiral;X[2,7,3,8],X[4,10,5,9],X[6,1,7,2],X[8,14,9,13],X[10,15,11,16],X[12,6,13,5],X[14,3,15,4],X[16,11,1,12]
8_17;8;amphichiral;X[6,2,7,1],X[14,8,15,7],X[8,3,9,4],X[2,13,3,14],X[12,5,13,6],X[4,9,5,10],X[16,12,1,11],X[10,16,11,15]
8_18;8;amphichiral;X[6,2,7,1],X[8,3,9,4],X[16,11,1,12],X[2,14,3,13],X[4,15,5,16],X[10,6,11,5],X[12,7,13,8],X[14,10,15,9]
8_19;8;chiral;X[2,14,3,13],X[5,11,6,10],X[7,15,8,14],X[9,5,10,4],X[11,7,12,6],X[12,2,13,1],X[15,9,16,8],X[16,4,1,3]
8_20;8;chiral;X[1,7,2,6],X[4,13,5,14],X[5,9,6,8],X[7,3,8,2],X[10,15,11,16],X[12,9,13,10],X[14,3,15,4],X[16,11,1,12]
8_21;8;chiral;X[1,7,2,6],X[4,13,5,14],X[5,9,6,8],X[7,3,8,2],X[9,13,10,12],X[11,1,12,16],X[14,3,15,4],X[15,11,16,10]
)KNOTS";

}  // namespace stickknot
