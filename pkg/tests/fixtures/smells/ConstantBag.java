package fixtures;

public class ConstantBag {
    public static final int limit00 = 0;
    public static final int limit01 = 1;
    public static final int limit02 = 2;
    public static final int limit03 = 3;
    public static final int limit04 = 4;
    public static final int limit05 = 5;
    public static final int limit06 = 6;
    public static final int limit07 = 7;
    public static final int limit08 = 8;
    public static final int limit09 = 9;
    public static final int limit10 = 10;
    public static final int limit11 = 11;
    public static final int limit12 = 12;
    public static final int limit13 = 13;
    public static final int limit14 = 14;
    public static final int limit15 = 15;
    public static final int limit16 = 16;
    public static final int limit17 = 17;
    public static final int limit18 = 18;
    public static final int limit19 = 19;
    public static final int limit20 = 20;
    public static final int limit21 = 21;
    public static final int limit22 = 22;
    public static final int limit23 = 23;
    public static final int limit24 = 24;
    public static final int limit25 = 25;
    public static final int limit26 = 26;
    public static final int limit27 = 27;
    public static final int limit28 = 28;
    public static final int limit29 = 29;
    public static final int limit30 = 30;
    public static final int limit31 = 31;
    public static final int limit32 = 32;
    public static final int limit33 = 33;
    public static final int limit34 = 34;
    public static final int limit35 = 35;
    public static final int limit36 = 36;
    public static final int limit37 = 37;
    public static final int limit38 = 38;
    public static final int limit39 = 39;
    public static final int limit40 = 40;
    public static final int limit41 = 41;
    public static final int limit42 = 42;
    public static final int limit43 = 43;
    public static final int limit44 = 44;
    public static final int limit45 = 45;
}
