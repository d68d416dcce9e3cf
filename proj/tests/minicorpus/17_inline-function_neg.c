static int f(int inlined)
{
    return inlined; /* inline */
}
